#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ringmarket {

/// A one-dimensional circular world: firms and buyers sit on a ring of
/// circumference `ring_length`; distance between two points is the shorter
/// arc. Positions live in [0, ring_length).
struct Geography {
    double ring_length = 1.0;
    std::vector<double> firm_positions;
    std::vector<double> buyer_positions;

    std::size_t firm_count() const { return firm_positions.size(); }
    std::size_t buyer_count() const { return buyer_positions.size(); }
};

/// Shorter-arc distance between two ring positions. Always in [0, length/2].
inline double ring_distance(double x, double y, double ring_length) {
    if (!(ring_length > 0.0))
        throw std::invalid_argument("ring_distance: ring length must be positive");
    if (!(x >= 0.0 && x < ring_length) || !(y >= 0.0 && y < ring_length))
        throw std::invalid_argument("ring_distance: positions must lie in [0, ring_length)");
    const double direct = std::abs(x - y);
    return std::min(direct, ring_length - direct);
}

/// Positions exactly equal to the ring length wrap to 0; anything else out
/// of range is an error.
inline double normalize_position(double x, double ring_length) {
    if (x == ring_length) return 0.0;
    return x;
}

inline void validate_geography(const Geography& geo) {
    if (!(geo.ring_length > 0.0))
        throw std::invalid_argument("geography: ring_length must be positive");
    if (geo.firm_positions.empty())
        throw std::invalid_argument("geography: at least one firm required");
    if (geo.buyer_positions.empty())
        throw std::invalid_argument("geography: at least one buyer required");
    for (double p : geo.firm_positions)
        if (!(p >= 0.0 && p < geo.ring_length))
            throw std::invalid_argument("geography: firm position outside [0, ring_length)");
    for (double p : geo.buyer_positions)
        if (!(p >= 0.0 && p < geo.ring_length))
            throw std::invalid_argument("geography: buyer position outside [0, ring_length)");
    for (std::size_t i = 0; i < geo.firm_positions.size(); ++i)
        for (std::size_t j = i + 1; j < geo.firm_positions.size(); ++j)
            if (geo.firm_positions[i] == geo.firm_positions[j])
                throw std::invalid_argument("geography: firm positions must be pairwise distinct");
}

/// Distance from one buyer to every firm, in firm order.
inline std::vector<double> cardinal_distances(const Geography& geo, std::size_t buyer_index) {
    if (buyer_index >= geo.buyer_count())
        throw std::out_of_range("cardinal_distances: buyer index out of range");
    const double b = geo.buyer_positions[buyer_index];
    std::vector<double> out(geo.firm_count());
    for (std::size_t i = 0; i < geo.firm_count(); ++i)
        out[i] = ring_distance(b, geo.firm_positions[i], geo.ring_length);
    return out;
}

/// Rank of each firm by distance from the given buyer: 0 = closest,
/// 1 = second closest, ... Ties go to the lower firm index. The result is a
/// permutation of 0..F-1 in firm order.
inline std::vector<int> ordinal_ranks(const Geography& geo, std::size_t buyer_index) {
    const std::vector<double> dist = cardinal_distances(geo, buyer_index);
    std::vector<std::size_t> order(dist.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dist[a] != dist[b]) return dist[a] < dist[b];
        return a < b;
    });
    std::vector<int> ranks(dist.size());
    for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<int>(r);
    return ranks;
}

/// The fixed reference world: unit ring, two firms at 0 and 1/2, twelve
/// buyers at the odd 24ths. Each firm is strictly closest to exactly six
/// buyers and no buyer sits on a firm or on a midpoint.
inline Geography canonical_arrangement() {
    Geography geo;
    geo.ring_length = 1.0;
    geo.firm_positions = {0.0, 0.5};
    geo.buyer_positions.reserve(12);
    for (int k = 0; k < 12; ++k)
        geo.buyer_positions.push_back((2.0 * k + 1.0) / 24.0);
    return geo;
}

}  // namespace ringmarket
