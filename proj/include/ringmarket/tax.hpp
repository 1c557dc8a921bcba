#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ringmarket {

enum class TaxKind { none, cardinal, ordinal };

inline const char* to_string(TaxKind kind) {
    switch (kind) {
        case TaxKind::none: return "none";
        case TaxKind::cardinal: return "cardinal";
        case TaxKind::ordinal: return "ordinal";
    }
    return "none";
}

inline TaxKind tax_kind_from_string(const std::string& s) {
    if (s == "none") return TaxKind::none;
    if (s == "cardinal") return TaxKind::cardinal;
    if (s == "ordinal") return TaxKind::ordinal;
    throw std::invalid_argument("tax.kind: must be one of none|cardinal|ordinal");
}

/// Transaction-cost scheme. `none` charges nothing; `cardinal` scales with
/// physical distance d, `ordinal` with the closeness rank D (0 = closest
/// firm, untaxed). lambda and gamma are ignored by `none` but still
/// validated.
struct TaxScheme {
    TaxKind kind = TaxKind::none;
    double lambda = 0.1;
    double gamma = 1.0;
};

inline void validate_tax(const TaxScheme& scheme) {
    if (!(scheme.lambda >= 0.0))
        throw std::invalid_argument("tax.lambda: must be >= 0");
    if (!(scheme.gamma > 0.0))
        throw std::invalid_argument("tax.gamma: must be > 0");
}

/// Multiplier applied to the posted price for one buyer-firm pair.
/// pow(0, gamma) is 0 for every gamma > 0, so a rank-0 purchase is never
/// taxed under the ordinal scheme.
inline double tax_multiplier(double cardinal_distance, int ordinal_rank, const TaxScheme& scheme) {
    switch (scheme.kind) {
        case TaxKind::none: return 1.0;
        case TaxKind::cardinal: return 1.0 + scheme.lambda * std::pow(cardinal_distance, scheme.gamma);
        case TaxKind::ordinal:
            return 1.0 + scheme.lambda * std::pow(static_cast<double>(ordinal_rank), scheme.gamma);
    }
    return 1.0;
}

/// What the buyer actually pays per unit: posted price plus the scheme's
/// transaction cost.
inline double effective_price(double posted_price, double cardinal_distance, int ordinal_rank,
                              const TaxScheme& scheme) {
    validate_tax(scheme);
    if (!(posted_price >= 0.0))
        throw std::invalid_argument("effective_price: posted price must be >= 0");
    if (!(cardinal_distance >= 0.0))
        throw std::invalid_argument("effective_price: distance must be >= 0");
    if (ordinal_rank < 0)
        throw std::invalid_argument("effective_price: ordinal rank must be >= 0");
    return posted_price * tax_multiplier(cardinal_distance, ordinal_rank, scheme);
}

}  // namespace ringmarket
