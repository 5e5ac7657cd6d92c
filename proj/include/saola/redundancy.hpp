#pragma once

#include <algorithm>

namespace saola {

/// Which relevance bounds the feature-feature correlation is compared with.
/// `min` is the plain rule; `max` raises the bound to the larger relevance.
enum class BoundMode { min, max };

/// `strict` reads the relevance comparison literally (>), so equally relevant
/// duplicates are all kept. `discard_new` lets the earlier feature win ties.
enum class TieBreak { strict, discard_new };

const char* to_string(BoundMode mode);
const char* to_string(TieBreak tie);

inline double correlation_bound(BoundMode mode, double rel_a, double rel_b) {
    return mode == BoundMode::min ? std::min(rel_a, rel_b) : std::max(rel_a, rel_b);
}

/// True when `stronger` shadows `weaker`: stronger is more relevant to the
/// class (or equally relevant, if `allow_tie`) and the two are correlated at
/// least as much as the bound.
inline bool shadows(double rel_stronger, double rel_weaker, double correlation, BoundMode mode, bool allow_tie) {
    const bool more_relevant = rel_stronger > rel_weaker || (allow_tie && rel_stronger == rel_weaker);
    return more_relevant && correlation >= correlation_bound(mode, rel_stronger, rel_weaker);
}

/// Relevance half of `shadows`, checked first so the correlation is only computed when needed.
inline bool could_shadow(double rel_stronger, double rel_weaker, bool allow_tie) {
    return rel_stronger > rel_weaker || (allow_tie && rel_stronger == rel_weaker);
}

} // namespace saola
