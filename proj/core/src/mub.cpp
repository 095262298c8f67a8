#include "qrac/mub.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qrac/error.hpp"
#include "qrac/format.hpp"

namespace qrac {

namespace {

constexpr std::size_t kExhaustiveCertifyMax = 64;
constexpr std::size_t kMaxMubDim = 1024;

// tr(u * v) for all element indices u, v.
std::vector<std::uint32_t> trace_form_table(const FieldSpec& f) {
    const std::uint32_t d = f.order();
    std::vector<FieldElem> elems;
    elems.reserve(d);
    for (std::uint32_t i = 0; i < d; ++i) elems.push_back(f.element(i));
    std::vector<std::uint32_t> tr_of(d);
    for (std::uint32_t i = 0; i < d; ++i) tr_of[i] = gf_trace(f, elems[i]);
    std::vector<std::uint32_t> table(std::size_t{d} * d);
    for (std::uint32_t u = 0; u < d; ++u) {
        for (std::uint32_t v = u; v < d; ++v) {
            const std::uint32_t t = tr_of[f.index_of(gf_mul(f, elems[u], elems[v]))];
            table[std::size_t{u} * d + v] = t;
            table[std::size_t{v} * d + u] = t;
        }
    }
    return table;
}

Basis make_basis(CMatrix m, std::size_t index) {
    for (std::size_t c = 0; c < m.dim(); ++c) fix_global_phase(m.col(c));
    return Basis{std::move(m), index, kGaloisTag};
}

std::vector<Basis> odd_characteristic(const FieldSpec& f) {
    const std::uint32_t d = f.order();
    const std::uint32_t p = f.p();
    const auto tr = trace_form_table(f);
    std::vector<std::uint32_t> square(d);
    for (std::uint32_t j = 0; j < d; ++j) {
        const FieldElem e = f.element(j);
        square[j] = f.index_of(gf_mul(f, e, e));
    }
    std::vector<cplx> roots(p);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::uint32_t e = 0; e < p; ++e) {
        roots[e] = std::polar(amp, 2.0 * std::numbers::pi * e / p);
    }

    std::vector<Basis> out;
    for (std::uint32_t a = 0; a < d; ++a) {
        CMatrix m(d);
        for (std::uint32_t b = 0; b < d; ++b) {
            for (std::uint32_t j = 0; j < d; ++j) {
                const std::uint32_t e = (tr[std::size_t{a} * d + square[j]] + tr[std::size_t{b} * d + j]) % p;
                m(j, b) = roots[e];
            }
        }
        out.push_back(make_basis(std::move(m), a + 1));
    }
    return out;
}

std::vector<Basis> even_characteristic(const FieldSpec& f) {
    const std::uint32_t d = f.order();
    const unsigned k = f.k();
    const auto tr = trace_form_table(f);
    // Polynomial basis x^r; x^{r+s} reduced, r + s <= 2k - 2.
    std::vector<std::uint32_t> monomial(2 * k - 1);
    {
        FieldElem x = f.zero();
        if (k > 1) {
            x.coeffs[1] = 1;
        } else {
            x = f.one();
        }
        FieldElem power = f.one();
        for (unsigned r = 0; r < 2 * k - 1; ++r) {
            monomial[r] = f.index_of(power);
            power = gf_mul(f, power, x);
        }
    }
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    const cplx quarter[4] = {{amp, 0.0}, {0.0, amp}, {-amp, 0.0}, {0.0, -amp}};

    std::vector<Basis> out;
    for (std::uint32_t a = 0; a < d; ++a) {
        std::vector<unsigned> form(std::size_t{k} * k);
        for (unsigned r = 0; r < k; ++r) {
            for (unsigned s = 0; s < k; ++s) form[r * k + s] = tr[std::size_t{a} * d + monomial[r + s]];
        }
        std::vector<unsigned> quad(d);
        for (std::uint32_t j = 0; j < d; ++j) {
            unsigned q = 0;
            for (unsigned r = 0; r < k; ++r) {
                if (((j >> r) & 1U) == 0) continue;
                q += form[r * k + r];
                for (unsigned s = r + 1; s < k; ++s) {
                    if ((j >> s) & 1U) q += 2 * form[r * k + s];
                }
            }
            quad[j] = q % 4;
        }
        CMatrix m(d);
        for (std::uint32_t b = 0; b < d; ++b) {
            for (std::uint32_t j = 0; j < d; ++j) {
                const unsigned dot = static_cast<unsigned>(__builtin_popcount(b & j)) & 1U;
                m(j, b) = quarter[(quad[j] + 2 * dot) % 4];
            }
        }
        out.push_back(make_basis(std::move(m), a + 1));
    }
    return out;
}

// Column sample used for large-d certification.
std::vector<std::size_t> sample_columns(std::size_t d) {
    std::vector<std::size_t> cols{0, 1, d / 2, d - 1};
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    return cols;
}

}  // namespace

double check_unbiased(const Basis& a, const Basis& b) {
    if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "check_unbiased");
    const std::size_t d = a.dim();
    const double target = 1.0 / std::sqrt(static_cast<double>(d));
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            worst = std::max(worst, std::abs(std::abs(inner(a.state(i), b.state(k))) - target));
        }
    }
    return worst;
}

MubSet certify_mub_set(std::vector<Basis> bases, std::string construction,
                       std::optional<FieldSpec> field) {
    if (bases.empty()) throw Error(ErrorKind::UnbiasednessCheckFailed, "empty basis list");
    const std::size_t d = bases.front().dim();
    for (const auto& b : bases) {
        if (b.dim() != d) throw Error(ErrorKind::DimensionMismatch, "bases of differing dimension");
    }
    if (bases.size() != d + 1) {
        throw Error(ErrorKind::UnbiasednessCheckFailed,
                    "expected " + std::to_string(d + 1) + " bases, got " + std::to_string(bases.size()));
    }
    double worst = 0.0;
    for (const auto& b : bases) {
        const double u = unitarity_deviation(b.matrix);
        if (u > kUnitaryTol) {
            throw Error(ErrorKind::UnbiasednessCheckFailed,
                        "basis " + std::to_string(b.index) + " not unitary, deviation " + std::to_string(u));
        }
    }
    const double target = 1.0 / std::sqrt(static_cast<double>(d));
    const auto cols = sample_columns(d);
    for (std::size_t x = 0; x < bases.size(); ++x) {
        for (std::size_t y = x + 1; y < bases.size(); ++y) {
            double dev = 0.0;
            if (d <= kExhaustiveCertifyMax) {
                dev = check_unbiased(bases[x], bases[y]);
            } else {
                for (std::size_t i : cols) {
                    for (std::size_t k = 0; k < d; ++k) {
                        dev = std::max(dev, std::abs(std::abs(inner(bases[x].state(i), bases[y].state(k))) - target));
                        dev = std::max(dev, std::abs(std::abs(inner(bases[x].state(k), bases[y].state(i))) - target));
                    }
                }
            }
            worst = std::max(worst, dev);
            if (dev > kUnbiasedTol) {
                throw Error(ErrorKind::UnbiasednessCheckFailed,
                            "bases " + std::to_string(x) + " and " + std::to_string(y) +
                                " deviate from 1/sqrt(d) by " + fmt17(dev));
            }
        }
    }
    MubSet set;
    set.dim_ = d;
    set.bases_ = std::move(bases);
    set.field_ = std::move(field);
    set.construction_ = std::move(construction);
    set.deviation_ = worst;
    return set;
}

MubSet galois_mubs(std::size_t d) {
    const PrimePower pk = factor_prime_power(d);
    if (pk.p == 0 || d > kMaxMubDim) {
        throw Error(ErrorKind::NotPrimePower, std::to_string(d) + " is not a prime power in [2, 1024]");
    }
    FieldSpec f(pk.p, pk.k);
    std::vector<Basis> bases;
    bases.push_back(Basis{CMatrix::identity(d), 0, kGaloisTag});
    auto rest = pk.p == 2 ? even_characteristic(f) : odd_characteristic(f);
    for (auto& b : rest) bases.push_back(std::move(b));
    return certify_mub_set(std::move(bases), kGaloisTag, std::move(f));
}

std::string bases_to_json(const std::vector<Basis>& bases, const std::string& construction) {
    const std::size_t d = bases.empty() ? 0 : bases.front().dim();
    std::ostringstream os;
    os << "{\"dim\":" << d << ",\"construction\":" << nlohmann::json(construction).dump() << ",\"bases\":[";
    for (std::size_t b = 0; b < bases.size(); ++b) {
        if (b) os << ',';
        os << '[';
        for (std::size_t c = 0; c < d; ++c) {
            if (c) os << ',';
            os << '[';
            const auto col = bases[b].state(c);
            for (std::size_t r = 0; r < d; ++r) {
                if (r) os << ',';
                os << '[' << fmt17(col[r].real()) << ',' << fmt17(col[r].imag()) << ']';
            }
            os << ']';
        }
        os << ']';
    }
    os << "]}\n";
    return os.str();
}

void save_bases(const std::vector<Basis>& bases, const std::string& construction,
                const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out << bases_to_json(bases, construction);
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

void save_bases(const MubSet& set, const std::filesystem::path& path) {
    save_bases(set.bases(), set.construction(), path);
}

LoadedBases parse_bases(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    LoadedBases out;
    try {
        const auto d = doc.at("dim").get<std::size_t>();
        out.construction = doc.value("construction", std::string{});
        const auto& arr = doc.at("bases");
        if (!arr.is_array()) throw Error(ErrorKind::ParseError, "\"bases\" must be an array");
        std::size_t index = 0;
        for (const auto& jb : arr) {
            if (!jb.is_array() || jb.size() != d) throw Error(ErrorKind::ParseError, "basis must have dim columns");
            CMatrix m(d);
            for (std::size_t c = 0; c < d; ++c) {
                const auto& jc = jb[c];
                if (!jc.is_array() || jc.size() != d) throw Error(ErrorKind::ParseError, "column must have dim entries");
                for (std::size_t r = 0; r < d; ++r) {
                    const auto& z = jc[r];
                    if (!z.is_array() || z.size() != 2) throw Error(ErrorKind::ParseError, "entry must be [re, im]");
                    m(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
                }
            }
            const double u = unitarity_deviation(m);
            if (u > kUnitaryTol) {
                throw Error(ErrorKind::NonUnitary, "basis " + std::to_string(index) + " deviates by " + fmt17(u));
            }
            out.bases.push_back(Basis{std::move(m), index++, out.construction});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    return out;
}

LoadedBases load_bases(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bases(ss.str());
}

}  // namespace qrac
