#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qrac/cmatrix.hpp"
#include "qrac/gfield.hpp"

namespace qrac {

inline constexpr double kUnbiasedTol = 1e-10;

/// An orthonormal basis; column i is the i-th basis state.
struct Basis {
    CMatrix matrix;
    std::size_t index = 0;
    std::string tag;

    std::size_t dim() const noexcept { return matrix.dim(); }
    std::span<const cplx> state(std::size_t i) const { return matrix.col(i); }
};

/// A complete set of d+1 pairwise mutually unbiased bases.
/// Only constructed through certify_mub_set() or galois_mubs().
class MubSet {
public:
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Basis>& bases() const noexcept { return bases_; }
    const Basis& operator[](std::size_t i) const { return bases_[i]; }
    std::size_t size() const noexcept { return bases_.size(); }
    const std::optional<FieldSpec>& field() const noexcept { return field_; }
    const std::string& construction() const noexcept { return construction_; }
    /// Largest |overlap| - 1/sqrt(d) deviation seen during certification.
    double certified_deviation() const noexcept { return deviation_; }

    friend MubSet certify_mub_set(std::vector<Basis> bases, std::string construction,
                                  std::optional<FieldSpec> field);

private:
    std::size_t dim_ = 0;
    std::vector<Basis> bases_;
    std::optional<FieldSpec> field_;
    std::string construction_;
    double deviation_ = 0.0;
};

/// max_{i,k} | |<a_i|b_k>| - 1/sqrt(d) |. Throws DimensionMismatch.
double check_unbiased(const Basis& a, const Basis& b);

/// Checks every pair of bases. Exhaustive over columns for d <= 64; above that
/// each basis pair is checked on a fixed sample of columns to keep the cost
/// at O(d^3) per pair. Throws UnbiasednessCheckFailed.
MubSet certify_mub_set(std::vector<Basis> bases, std::string construction,
                       std::optional<FieldSpec> field = std::nullopt);

/// The complete Galois MUB set in prime-power dimension 2 <= d <= 1024.
///
/// Basis 0 is computational. For odd p, basis mu >= 1 uses field element
/// a = element(mu - 1) and has column i (element b = element(i)) with j-th
/// amplitude omega_p^{tr(a j^2 + b j)} / sqrt(d). For p = 2 the phases are
/// i^{Q_a(j) + 2 b.j} with Q_a the Z_4 lift of the trace form tr(a x y) on the
/// polynomial basis. Throws NotPrimePower, UnbiasednessCheckFailed.
MubSet galois_mubs(std::size_t d);

inline constexpr const char* kGaloisTag = "galois";

/// JSON basis-set file (see README for the schema).
void save_bases(const std::vector<Basis>& bases, const std::string& construction,
                const std::filesystem::path& path);
void save_bases(const MubSet& set, const std::filesystem::path& path);

struct LoadedBases {
    std::vector<Basis> bases;
    std::string construction;
};
/// Throws ParseError, NonUnitary, IoError. Does not certify unbiasedness.
LoadedBases load_bases(const std::filesystem::path& path);
LoadedBases parse_bases(const std::string& json_text);
std::string bases_to_json(const std::vector<Basis>& bases, const std::string& construction);

}  // namespace qrac
