#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ringmarket/errors.hpp"

namespace ringmarket {

/// Finite two-player game. Payoffs are row-major m x n; labels carry the
/// underlying strategy values (prices, quantities) for reporting.
struct BimatrixGame {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> row_payoff;  // player 1
    std::vector<double> col_payoff;  // player 2
    std::vector<double> row_labels;
    std::vector<double> col_labels;

    double payoff1(std::size_t r, std::size_t c) const { return row_payoff[r * cols + c]; }
    double payoff2(std::size_t r, std::size_t c) const { return col_payoff[r * cols + c]; }
};

inline void validate_bimatrix(const BimatrixGame& game) {
    if (game.rows == 0 || game.cols == 0)
        throw std::invalid_argument("bimatrix: game must have at least one strategy per player");
    const std::size_t n = game.rows * game.cols;
    if (game.row_payoff.size() != n || game.col_payoff.size() != n)
        throw std::invalid_argument("bimatrix: payoff matrices must share dimensions");
    if (game.row_labels.size() != game.rows || game.col_labels.size() != game.cols)
        throw std::invalid_argument("bimatrix: labels must match dimensions");
    for (double v : game.row_payoff)
        if (!std::isfinite(v)) throw std::invalid_argument("bimatrix: payoffs must be finite");
    for (double v : game.col_payoff)
        if (!std::isfinite(v)) throw std::invalid_argument("bimatrix: payoffs must be finite");
}

struct CellIndex {
    std::size_t row = 0;
    std::size_t col = 0;
};

/// All cells where neither player can strictly improve by a unilateral
/// deviation, in row-major order.
inline std::vector<CellIndex> pure_nash(const BimatrixGame& game) {
    validate_bimatrix(game);
    std::vector<double> col_best(game.cols, -std::numeric_limits<double>::infinity());
    std::vector<double> row_best(game.rows, -std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < game.rows; ++r)
        for (std::size_t c = 0; c < game.cols; ++c) {
            col_best[c] = std::max(col_best[c], game.payoff1(r, c));
            row_best[r] = std::max(row_best[r], game.payoff2(r, c));
        }
    std::vector<CellIndex> cells;
    for (std::size_t r = 0; r < game.rows; ++r)
        for (std::size_t c = 0; c < game.cols; ++c)
            if (game.payoff1(r, c) == col_best[c] && game.payoff2(r, c) == row_best[r])
                cells.push_back({r, c});
    return cells;
}

/// Independent mixing over each player's strategies; entries are >= 0 and
/// sum to 1 per vector.
struct MixedProfile {
    std::vector<double> row_probs;
    std::vector<double> col_probs;
};

inline std::array<double, 2> expected_payoffs(const BimatrixGame& game, const MixedProfile& p) {
    double v1 = 0.0, v2 = 0.0;
    for (std::size_t r = 0; r < game.rows; ++r) {
        if (p.row_probs[r] == 0.0) continue;
        double a = 0.0, b = 0.0;
        for (std::size_t c = 0; c < game.cols; ++c) {
            a += game.payoff1(r, c) * p.col_probs[c];
            b += game.payoff2(r, c) * p.col_probs[c];
        }
        v1 += p.row_probs[r] * a;
        v2 += p.row_probs[r] * b;
    }
    return {v1, v2};
}

struct MixedNashOptions {
    /// Stop after the smallest support size that yields at least one
    /// equilibrium instead of enumerating every size.
    bool stop_at_first_size = false;
    /// Hard cap on examined support pairs; exceeding it is a solver error.
    std::size_t max_support_pairs = 50'000'000;
};

namespace detail {

// Gaussian elimination with partial pivoting, in place. M is n x n
// row-major, rhs length n; solution overwrites rhs. False if singular.
inline bool solve_linear(std::vector<double>& M, std::vector<double>& rhs, std::size_t n) {
    double max_entry = 0.0;
    for (double v : M) max_entry = std::max(max_entry, std::abs(v));
    const double pivot_floor = std::max(max_entry, 1.0) * 1e-13;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(M[r * n + col]) > std::abs(M[pivot * n + col])) pivot = r;
        if (std::abs(M[pivot * n + col]) < pivot_floor) return false;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(M[pivot * n + c], M[col * n + c]);
            std::swap(rhs[pivot], rhs[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = M[r * n + col] / M[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) M[r * n + c] -= f * M[col * n + c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double v = rhs[r];
        for (std::size_t c = r + 1; c < n; ++c) v -= M[r * n + c] * rhs[c];
        rhs[r] = v / M[r * n + r];
    }
    return true;
}

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] + (k - i) < n) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Iterated elimination of strategies strictly dominated by another pure
// strategy. Keeps the full equilibrium set intact while shrinking the
// enumeration space. Returns surviving original indices, ascending.
inline void eliminate_dominated(const BimatrixGame& game, std::vector<std::size_t>& rows,
                                std::vector<std::size_t>& cols) {
    rows.resize(game.rows);
    cols.resize(game.cols);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    bool changed = true;
    while (changed && rows.size() > 1 && cols.size() > 1) {
        changed = false;
        for (std::size_t a = 0; a < rows.size(); ++a) {
            bool dominated = false;
            for (std::size_t b = 0; b < rows.size() && !dominated; ++b) {
                if (a == b) continue;
                dominated = true;
                for (std::size_t c : cols)
                    if (game.payoff1(rows[b], c) <= game.payoff1(rows[a], c)) {
                        dominated = false;
                        break;
                    }
            }
            if (dominated) {
                rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(a));
                changed = true;
                break;
            }
        }
        for (std::size_t a = 0; a < cols.size(); ++a) {
            bool dominated = false;
            for (std::size_t b = 0; b < cols.size() && !dominated; ++b) {
                if (a == b) continue;
                dominated = true;
                for (std::size_t r : rows)
                    if (game.payoff2(r, cols[b]) <= game.payoff2(r, cols[a])) {
                        dominated = false;
                        break;
                    }
            }
            if (dominated) {
                cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(a));
                changed = true;
                break;
            }
        }
    }
}

}  // namespace detail

/// Support enumeration over equal-size supports in ascending size. Every
/// profile returned makes each player indifferent across its support (to
/// 1e-9) with no strictly better strategy outside it. Pure equilibria show
/// up as one-point profiles.
inline std::vector<MixedProfile> mixed_nash(const BimatrixGame& game,
                                            const MixedNashOptions& opts = {}) {
    validate_bimatrix(game);
    constexpr double kTol = 1e-9;
    constexpr double kDegenerate = 1e-9;

    std::vector<std::size_t> rows, cols;
    detail::eliminate_dominated(game, rows, cols);

    std::vector<MixedProfile> found;
    std::size_t pairs = 0;
    const std::size_t max_k = std::min(rows.size(), cols.size());

    std::vector<double> M, rhs, y, x;
    for (std::size_t k = 1; k <= max_k; ++k) {
        const std::size_t found_before = found.size();
        std::vector<std::size_t> rsel(k);
        std::iota(rsel.begin(), rsel.end(), std::size_t{0});
        do {
            std::vector<std::size_t> csel(k);
            std::iota(csel.begin(), csel.end(), std::size_t{0});
            do {
                if (++pairs > opts.max_support_pairs)
                    throw solver_error("mixed_nash: support enumeration budget exhausted");

                // Column mix y keeps the row player indifferent across its
                // support; unknowns are y_c and the common value v1.
                const std::size_t n = k + 1;
                M.assign(n * n, 0.0);
                rhs.assign(n, 0.0);
                rhs[k] = 1.0;
                for (std::size_t i = 0; i < k; ++i) {
                    for (std::size_t j = 0; j < k; ++j)
                        M[i * n + j] = game.payoff1(rows[rsel[i]], cols[csel[j]]);
                    M[i * n + k] = -1.0;
                }
                for (std::size_t j = 0; j < k; ++j) M[k * n + j] = 1.0;
                if (!detail::solve_linear(M, rhs, n)) continue;
                y.assign(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(k));

                M.assign(n * n, 0.0);
                rhs.assign(n, 0.0);
                rhs[k] = 1.0;
                for (std::size_t j = 0; j < k; ++j) {
                    for (std::size_t i = 0; i < k; ++i)
                        M[j * n + i] = game.payoff2(rows[rsel[i]], cols[csel[j]]);
                    M[j * n + k] = -1.0;
                }
                for (std::size_t i = 0; i < k; ++i) M[k * n + i] = 1.0;
                if (!detail::solve_linear(M, rhs, n)) continue;
                x.assign(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(k));

                bool ok = true;
                for (double v : y)
                    if (!(v >= kDegenerate)) ok = false;
                for (double v : x)
                    if (!(v >= kDegenerate)) ok = false;
                if (!ok) continue;

                MixedProfile profile;
                profile.row_probs.assign(game.rows, 0.0);
                profile.col_probs.assign(game.cols, 0.0);
                double xs = 0.0, ys = 0.0;
                for (double v : x) xs += v;
                for (double v : y) ys += v;
                for (std::size_t i = 0; i < k; ++i) profile.row_probs[rows[rsel[i]]] = x[i] / xs;
                for (std::size_t j = 0; j < k; ++j) profile.col_probs[cols[csel[j]]] = y[j] / ys;

                // Verify on the original game: support indifference and no
                // profitable strategy outside either support.
                double sup1_min = std::numeric_limits<double>::infinity();
                double sup1_max = -sup1_min;
                double out1_max = -sup1_min;
                for (std::size_t r = 0; r < game.rows; ++r) {
                    double e = 0.0;
                    for (std::size_t c = 0; c < game.cols; ++c)
                        e += game.payoff1(r, c) * profile.col_probs[c];
                    if (profile.row_probs[r] > 0.0) {
                        sup1_min = std::min(sup1_min, e);
                        sup1_max = std::max(sup1_max, e);
                    } else {
                        out1_max = std::max(out1_max, e);
                    }
                }
                double sup2_min = std::numeric_limits<double>::infinity();
                double sup2_max = -sup2_min;
                double out2_max = -sup2_min;
                for (std::size_t c = 0; c < game.cols; ++c) {
                    double e = 0.0;
                    for (std::size_t r = 0; r < game.rows; ++r)
                        e += game.payoff2(r, c) * profile.row_probs[r];
                    if (profile.col_probs[c] > 0.0) {
                        sup2_min = std::min(sup2_min, e);
                        sup2_max = std::max(sup2_max, e);
                    } else {
                        out2_max = std::max(out2_max, e);
                    }
                }
                if (sup1_max - sup1_min > kTol || sup2_max - sup2_min > kTol) continue;
                if (out1_max > sup1_max + kTol || out2_max > sup2_max + kTol) continue;
                found.push_back(std::move(profile));
            } while (detail::next_combination(csel, cols.size()));
        } while (detail::next_combination(rsel, rows.size()));
        if (opts.stop_at_first_size && found.size() > found_before) break;
    }
    return found;
}

/// One equilibrium plus its payoffs. Pure candidates carry the cell and an
/// empty profile; mixed candidates carry the profile.
struct EquilibriumCandidate {
    bool pure = false;
    CellIndex cell;
    MixedProfile profile;
    std::array<double, 2> payoffs{0.0, 0.0};
};

namespace detail {

inline int compare_lex(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

inline std::size_t diag_distance(const EquilibriumCandidate& c) {
    if (!c.pure) return 0;
    return c.cell.row > c.cell.col ? c.cell.row - c.cell.col : c.cell.col - c.cell.row;
}

// Preference order: pure before mixed, then highest total payoff, then the
// cell closest to the diagonal (mirror-image pure equilibria otherwise tie
// exactly in symmetric games and the asymmetric one would win), then lowest
// strategy indices.
inline bool candidate_preferred(const EquilibriumCandidate& a, const EquilibriumCandidate& b) {
    if (a.pure != b.pure) return a.pure;
    const double ta = a.payoffs[0] + a.payoffs[1];
    const double tb = b.payoffs[0] + b.payoffs[1];
    if (ta != tb) return ta > tb;
    if (a.pure) {
        if (diag_distance(a) != diag_distance(b)) return diag_distance(a) < diag_distance(b);
        if (a.cell.row != b.cell.row) return a.cell.row < b.cell.row;
        return a.cell.col < b.cell.col;
    }
    const int r = compare_lex(a.profile.row_probs, b.profile.row_probs);
    if (r != 0) return r > 0;  // larger prob on an earlier strategy wins
    return compare_lex(a.profile.col_probs, b.profile.col_probs) > 0;
}

}  // namespace detail

inline EquilibriumCandidate select_equilibrium(const std::vector<EquilibriumCandidate>& candidates) {
    if (candidates.empty())
        throw std::invalid_argument("select_equilibrium: empty candidate list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (detail::candidate_preferred(candidates[i], candidates[best])) best = i;
    return candidates[best];
}

struct SolvedGame {
    EquilibriumCandidate selected;
    std::size_t pure_count = 0;
    std::size_t mixed_count = 0;

    std::size_t candidate_count() const { return pure_count + mixed_count; }
};

/// Full pipeline for one finite game: pure equilibria first, support
/// enumeration as a fallback, then the selection rule.
inline SolvedGame solve_subgame(const BimatrixGame& game) {
    SolvedGame result;
    std::vector<EquilibriumCandidate> candidates;
    for (const CellIndex& cell : pure_nash(game)) {
        EquilibriumCandidate c;
        c.pure = true;
        c.cell = cell;
        c.payoffs = {game.payoff1(cell.row, cell.col), game.payoff2(cell.row, cell.col)};
        candidates.push_back(std::move(c));
    }
    result.pure_count = candidates.size();
    if (candidates.empty()) {
        MixedNashOptions opts;
        opts.stop_at_first_size = true;
        for (MixedProfile& profile : mixed_nash(game, opts)) {
            EquilibriumCandidate c;
            c.pure = false;
            c.payoffs = expected_payoffs(game, profile);
            c.profile = std::move(profile);
            candidates.push_back(std::move(c));
        }
        result.mixed_count = candidates.size();
    }
    if (candidates.empty()) throw solver_error("solve_subgame: no equilibrium found");
    result.selected = select_equilibrium(candidates);
    return result;
}

}  // namespace ringmarket
