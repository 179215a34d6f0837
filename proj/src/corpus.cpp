#include "slhardy/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "slhardy/errors.hpp"

namespace slhardy {

namespace {

// Zero-valued endpoints plus samples of shape(x), x in (0, 1) across [a, b] in log t.
template <class Shape>
RadialProfile sampled(double a, double b, int nodes, Shape shape) {
    std::vector<double> r = log_grid(a, b, nodes);
    std::vector<double> v(r.size());
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = shape((std::log(r[i]) - la) / (lb - la), r[i]);
    v.front() = 0.0;
    v.back() = 0.0;
    return RadialProfile(std::move(r), std::move(v));
}

// C^1 plateau: 0 at the ends, 1 on the middle [w, 1-w].
double plateau(double x, double w) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double y = std::min(x, 1.0 - x);
    if (y >= w) return 1.0;
    return 0.5 - 0.5 * std::cos(std::numbers::pi * y / w);
}

} // namespace

std::string to_string(CorpusKind k) {
    switch (k) {
    case CorpusKind::Bump: return "bump";
    case CorpusKind::Tent: return "tent";
    case CorpusKind::PotentialPower: return "potential_power";
    case CorpusKind::RandomPiecewise: return "random_piecewise";
    }
    return "?";
}

std::vector<CorpusEntry> make_corpus(const CorpusOptions& opt, const std::optional<WeightSpec>& weight) {
    if (opt.count < 0) throw DomainError("corpus: count must be >= 0");
    if (!(opt.support_lo > 0.0 && opt.support_lo < opt.support_hi && opt.support_hi <= 1.0)) {
        throw DomainError("corpus: need 0 < support_lo < support_hi <= 1");
    }
    if (opt.smooth_nodes < 4 || opt.max_random_nodes < 4) throw DomainError("corpus: too few nodes");
    const bool have_potential = weight && classify(*weight) == WeightClass::P;

    std::vector<CorpusEntry> out;
    out.reserve(static_cast<std::size_t>(opt.count));
    const double llo = std::log(opt.support_lo * opt.eta);
    const double lhi = std::log(opt.support_hi * opt.eta);
    for (int i = 0; i < opt.count; ++i) {
        // One generator per entry keeps entries independent of each other.
        std::mt19937_64 rng(opt.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i + 1)));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const double la = llo + (lhi - llo - 0.7) * U(rng);
        const double lb = la + 0.5 + (lhi - la - 0.5) * U(rng);
        const double a = std::exp(la), b = std::exp(lb);
        const double amp = 0.5 + 1.5 * U(rng);

        CorpusEntry e{static_cast<CorpusKind>(i % 4), "", {}};
        if (e.kind == CorpusKind::PotentialPower && !have_potential) e.kind = CorpusKind::Bump;
        switch (e.kind) {
        case CorpusKind::Bump: {
            const int m = 2 + static_cast<int>(3 * U(rng));
            e.u = sampled(a, b, opt.smooth_nodes, [&](double x, double) {
                const double y = 2.0 * x - 1.0;
                return amp * std::pow(1.0 - y * y, m);
            });
            e.label = "bump m=" + std::to_string(m);
            break;
        }
        case CorpusKind::Tent: {
            const double c = std::exp(la + (lb - la) * (0.2 + 0.6 * U(rng)));
            e.u = RadialProfile({a, c, b}, {0.0, amp, 0.0});
            e.label = "tent";
            break;
        }
        case CorpusKind::PotentialPower: {
            const double delta = 0.05 + 0.9 * U(rng);
            const double w = 0.1 + 0.2 * U(rng);
            e.u = sampled(a, b, opt.smooth_nodes, [&](double x, double t) {
                return amp * std::pow(f_eta(*weight, t), delta) * plateau(x, w);
            });
            e.label = "potential_power delta=" + std::to_string(delta);
            break;
        }
        case CorpusKind::RandomPiecewise: {
            const int n = 4 + static_cast<int>((opt.max_random_nodes - 3) * U(rng));
            std::vector<double> r(static_cast<std::size_t>(n));
            r.front() = a;
            r.back() = b;
            for (int j = 1; j + 1 < n; ++j) r[static_cast<std::size_t>(j)] = std::exp(la + (lb - la) * U(rng));
            std::sort(r.begin(), r.end());
            r.erase(std::unique(r.begin(), r.end()), r.end());
            std::vector<double> v(r.size());
            const double lo = opt.allow_sign_change ? -0.5 : 0.0;
            for (double& x : v) x = amp * (lo + (1.0 - lo) * U(rng));
            v.front() = 0.0;
            v.back() = 0.0;
            e.u = RadialProfile(std::move(r), std::move(v));
            e.label = "random_piecewise nodes=" + std::to_string(e.u.size());
            break;
        }
        }
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace slhardy
