#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slhardy/profile.hpp"
#include "slhardy/weights.hpp"

namespace slhardy {

enum class CorpusKind { Bump, Tent, PotentialPower, RandomPiecewise };
std::string to_string(CorpusKind k);

struct CorpusOptions {
    int count = 200;
    std::uint64_t seed = 20240611;
    double eta = 1.0;
    // Supports lie inside [support_lo, support_hi] * eta.
    double support_lo = 1e-6;
    double support_hi = 0.9;
    int smooth_nodes = 96;   // nodes for bumps and potential powers
    int max_random_nodes = 32;
    bool allow_sign_change = true;
};

struct CorpusEntry {
    CorpusKind kind;
    std::string label;
    RadialProfile u;
};

// Deterministic in (options, weight). Kinds cycle in a fixed order; the
// potential-power kind uses f_eta of `weight` (P-class) and falls back to a
// bump otherwise.
std::vector<CorpusEntry> make_corpus(const CorpusOptions& opt, const std::optional<WeightSpec>& weight = {});

} // namespace slhardy
