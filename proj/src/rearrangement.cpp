#include "slhardy/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "slhardy/errors.hpp"
#include "slhardy/quadrature.hpp"

namespace slhardy {

namespace {

constexpr double kKnotsPerDecade = 16.0;
constexpr double kKnotRange = 1e-14;

// int_0^r0 f(s) ds for f integrable at 0, summed over dyadic shells.
double integrate_to_zero(const std::function<double(double)>& f, double r0) {
    double sum = 0.0;
    double hi = r0;
    for (int j = 0; j < 3000; ++j) {
        const double lo = 0.5 * hi;
        const double piece = quad::integrate_log(f, lo, hi, {1e-300, 1e-13, 2000}).value;
        sum += piece;
        if (!std::isfinite(sum)) break;
        if (j >= 8 && std::abs(piece) <= 1e-16 * std::abs(sum)) return sum;
        if (lo < 1e-300) break;
        hi = lo;
    }
    if (sum == 0.0) return 0.0;
    throw DomainError("integral at the origin diverges or decays too slowly for the double range");
}

// Breakpoints of |u| on (r_0, r_N]: nodes plus interior zero crossings.
std::vector<double> breakpoints(const RadialProfile& u) {
    const auto r = u.radii();
    const auto v = u.values();
    std::vector<double> out;
    out.reserve(2 * r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0 && ((v[i - 1] < 0.0 && v[i] > 0.0) || (v[i - 1] > 0.0 && v[i] < 0.0))) {
            out.push_back(r[i - 1] + (r[i] - r[i - 1]) * v[i - 1] / (v[i - 1] - v[i]));
        }
        out.push_back(r[i]);
    }
    return out;
}

// omega * int of f(r) g(r) r^(n-1) between consecutive breakpoints.
double piecewise_integral(const AdmissibleDensity& g, const std::vector<double>& bp,
                          const std::function<double(double)>& f, double omega) {
    const int n = g.dimension();
    std::vector<std::pair<double, double>> pieces;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if (bp[i + 1] > bp[i]) pieces.emplace_back(bp[i], bp[i + 1]);
    }
    return omega * quad::integrate_pieces_log([&](double r) { return f(r) * g(r) * std::pow(r, n - 1); }, pieces).value;
}

class LevelSets {
public:
    LevelSets(const AdmissibleDensity& g, const RadialProfile& u) : g_(g), u_(u) {
        const auto r = u.radii();
        node_mu_.reserve(r.size());
        for (double x : r) node_mu_.push_back(g.ball_measure(std::min(x, g.r_max())));
    }

    double measure(double t, bool closed) const {
        const auto r = u_.radii();
        const auto v = u_.values();
        auto pred = [&](double x) { return closed ? x >= t : x > t; };
        // Accumulate sum of (mu(b) - mu(a)) over maximal runs.
        double total = 0.0;
        double run_start_mu = -1.0;
        auto open_run = [&](double mu_a) {
            if (run_start_mu < 0.0) run_start_mu = mu_a;
        };
        auto close_run = [&](double mu_b) {
            if (run_start_mu >= 0.0) {
                total += mu_b - run_start_mu;
                run_start_mu = -1.0;
            }
        };
        if (pred(std::abs(v[0]))) open_run(0.0);
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            // Split at a sign change so |u| is linear on each piece.
            double xs[3] = {r[i], 0.0, r[i + 1]};
            double ys[3] = {std::abs(v[i]), 0.0, std::abs(v[i + 1])};
            double ms[3] = {node_mu_[i], 0.0, node_mu_[i + 1]};
            int count = 2;
            if ((v[i] < 0.0 && v[i + 1] > 0.0) || (v[i] > 0.0 && v[i + 1] < 0.0)) {
                xs[1] = r[i] + (r[i + 1] - r[i]) * v[i] / (v[i] - v[i + 1]);
                ms[1] = mu_at(xs[1]);
                count = 3;
            } else {
                xs[1] = xs[2];
                ys[1] = ys[2];
                ms[1] = ms[2];
            }
            for (int s = 0; s + 1 < count; ++s) {
                const double A = ys[s], B = ys[s + 1];
                const bool pa = pred(A), pb = pred(B);
                if (pa && pb) {
                    open_run(ms[s]);
                } else if (pa && !pb) {
                    open_run(ms[s]);
                    close_run(mu_at(xs[s] + (xs[s + 1] - xs[s]) * (t - A) / (B - A)));
                } else if (!pa && pb) {
                    open_run(mu_at(xs[s] + (xs[s + 1] - xs[s]) * (t - A) / (B - A)));
                } else {
                    close_run(ms[s]);
                }
            }
        }
        close_run(node_mu_.back());
        return std::max(total, 0.0);
    }

private:
    double mu_at(double x) const { return g_.ball_measure(std::min(x, g_.r_max())); }

    const AdmissibleDensity& g_;
    const RadialProfile& u_;
    std::vector<double> node_mu_;
};

} // namespace

double unit_sphere_measure(int n) {
    if (n < 1) throw DomainError("unit_sphere_measure: n must be >= 1");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

AdmissibleDensity::AdmissibleDensity(int n, double r_max, Fn g, Fn radial_cumulative, bool tabulate_g)
    : n_(n), r_max_(r_max), g_(std::move(g)), cumulative_(std::move(radial_cumulative)), tabulate_g_(tabulate_g) {
    if (n < 1) throw DomainError("AdmissibleDensity: n must be >= 1");
    if (!(r_max > 0.0)) throw DomainError("AdmissibleDensity: r_max must be positive");
    if (!g_) throw DomainError("AdmissibleDensity: missing density");
    omega_ = unit_sphere_measure(n);

    double prev = std::numeric_limits<double>::infinity();
    for (double r : log_grid(r_max * 1e-12, r_max, 401)) {
        const double v = g_(r);
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("AdmissibleDensity: g must be finite and >= 0");
        if (v > prev * (1.0 + 1e-12)) throw DomainError("AdmissibleDensity: g must be non-increasing in r");
        prev = v;
    }
    if (cumulative_) return;

    const int decades = static_cast<int>(std::ceil(-std::log10(kKnotRange)));
    knots_ = log_grid(r_max * kKnotRange, r_max, static_cast<int>(decades * kKnotsPerDecade) + 1);
    auto integrand = [this](double s) { return g_(s) * std::pow(s, n_ - 1); };
    knot_cum_.resize(knots_.size());
    knot_cum_[0] = integrate_to_zero(integrand, knots_[0]);
    auto in_log = [&](double x) {
        const double s = std::exp(x);
        return integrand(s) * s;
    };
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const double piece = quad::integrate_log(integrand, knots_[i - 1], knots_[i], {1e-300, 1e-14, 4000}).value;
        knot_cum_[i] = knot_cum_[i - 1] + piece;
        // kinks in g (steps, cutoffs) fail one of the two checks and keep quadrature
        const double xa = std::log(knots_[i - 1]), xb = std::log(knots_[i]);
        panels_.emplace_back(in_log, xa, xb);
        const double probe = xa + 0.3 * (xb - xa), fp = in_log(probe);
        const double probe2 = xa + 0.77 * (xb - xa), fp2 = in_log(probe2);
        const double scale = std::abs(piece) / (xb - xa);
        const auto& pan = panels_.back();
        panel_ok_.push_back(std::abs(pan.total() - piece) <= 1e-13 * std::abs(piece) &&
                            std::abs(pan.integrand(probe) - fp) <= 1e-12 * scale);
        panel_pointwise_.push_back(panel_ok_.back() && fp > 0.0 && fp2 > 0.0 &&
                                   std::abs(pan.integrand(probe) - fp) <= 1e-13 * fp &&
                                   std::abs(pan.integrand(probe2) - fp2) <= 1e-13 * fp2);
    }
}

double AdmissibleDensity::operator()(double r) const {
    if (tabulate_g_ && !panels_.empty() && r > knots_.front() && r < knots_.back()) {
        const auto i = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), r) - knots_.begin()) - 1;
        if (panel_pointwise_[i]) {
            const double x = std::log(r);
            return panels_[i].integrand(x) * std::exp(-n_ * x);
        }
    }
    return g_(r);
}

double AdmissibleDensity::radial_cumulative(double r) const {
    if (r <= 0.0) return 0.0;
    if (cumulative_) return cumulative_(r);
    auto integrand = [this](double s) { return g_(s) * std::pow(s, n_ - 1); };
    if (r < knots_.front()) return integrate_to_zero(integrand, r);
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
    const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (r == knots_[i]) return knot_cum_[i];
    if (i < panels_.size() && panel_ok_[i]) return knot_cum_[i] + panels_[i](std::log(r));
    auto f = [&](double x) {
        const double s = std::exp(x);
        return integrand(s) * s;
    };
    quad::Result q = quad::gk15(f, std::log(knots_[i]), std::log(r));
    if (q.error > 1e-14 * std::abs(q.value) + 1e-300) {
        q = quad::integrate_log(integrand, knots_[i], r, {1e-300, 1e-14, 4000});
    }
    return knot_cum_[i] + q.value;
}

double AdmissibleDensity::ball_measure(double r) const {
    if (r < 0.0 || r > r_max_ * (1.0 + 1e-12)) throw DomainError("ball_measure: r outside [0, r_max]");
    return omega_ * radial_cumulative(std::min(r, r_max_));
}

double AdmissibleDensity::radius_for_measure(double m) const {
    if (m <= 0.0) return 0.0;
    const double target = m / omega_;
    if (target >= radial_cumulative(r_max_)) return r_max_;
    double lo = 0.0, hi = 0.0;
    if (!cumulative_ && target >= knot_cum_.front()) {
        const auto it = std::upper_bound(knot_cum_.begin(), knot_cum_.end(), target);
        const auto i = static_cast<std::size_t>(it - knot_cum_.begin());
        lo = std::log(knots_[i - 1]);
        hi = std::log(knots_[std::min(i, knots_.size() - 1)]);
    } else {
        hi = std::log(cumulative_ ? r_max_ : knots_.front());
        lo = hi - 700.0;
    }
    // Safeguarded Newton in log r; dC/dlog r = g(r) r^n.
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double r = std::exp(x);
        const double c = radial_cumulative(r) - target;
        (c >= 0.0 ? hi : lo) = x;
        // the cumulative itself is only good to roundoff
        if (std::abs(c) <= 1e-14 * target) return r;
        const double slope = (*this)(r) * std::pow(r, n_);
        double next = slope > 0.0 ? x - c / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4e-16 * std::max(1.0, std::abs(x))) return std::exp(next);
        x = next;
    }
    return std::exp(hi);
}

double distribution(const AdmissibleDensity& g, const RadialProfile& u, double t, bool closed) {
    if (t < 0.0) throw DomainError("distribution: level must be >= 0");
    return LevelSets(g, u).measure(t, closed);
}

double rearranged_value(const AdmissibleDensity& g, const RadialProfile& u, double r) {
    const LevelSets sets(g, u);
    const double m = g.ball_measure(std::min(r, g.r_max()));
    const double top = u.max_abs();
    if (sets.measure(0.0, false) <= m) return 0.0;
    double lo = 0.0, hi = top;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * top; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sets.measure(mid, false) > m ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

RadialProfile rearrange(const AdmissibleDensity& g, const RadialProfile& u) {
    const double top = u.max_abs();
    if (top == 0.0) return RadialProfile({u.radii().front()}, {0.0});
    if (u.support_radius() > g.r_max() * (1.0 + 1e-12)) {
        throw DomainError("rearrange: profile support exceeds the density range");
    }
    const LevelSets sets(g, u);

    std::vector<double> levels{0.0, top};
    for (double v : u.values()) levels.push_back(std::abs(v));
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    struct Point {
        double rho, value;
    };
    std::vector<Point> pts;
    auto rho_open = [&](double t) { return g.radius_for_measure(sets.measure(t, false)); };
    auto rho_closed = [&](double t) { return g.radius_for_measure(sets.measure(t, true)); };

    constexpr double kTol = 1e-8;
    std::function<void(Point, Point, int)> refine = [&](Point a, Point b, int depth) {
        // a: higher level (smaller radius), b: lower level
        if (depth > 30 || b.rho - a.rho <= 1e-11 * b.rho) return;
        const double tm = 0.5 * (a.value + b.value);
        const Point m{rho_open(tm), tm};
        const double lam = (m.rho - a.rho) / (b.rho - a.rho);
        const double interp = a.value + lam * (b.value - a.value);
        // the value test alone lets the measure drift near the peak, where level sets are thin
        const double rho_lin = a.rho + (b.rho - a.rho) * (tm - a.value) / (b.value - a.value);
        if (std::abs(interp - tm) <= kTol * top && std::abs(rho_lin - m.rho) <= 10 * kTol * m.rho) return;
        pts.push_back(m);
        refine(a, m, depth + 1);
        refine(m, b, depth + 1);
    };

    Point prev{rho_closed(top), top};
    pts.push_back({rho_open(top), top});
    pts.push_back(prev);
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const double t = levels[i];
        const Point lo_open{rho_open(t), t};
        refine(prev, lo_open, 0);
        pts.push_back(lo_open);
        prev = t > 0.0 ? Point{rho_closed(t), t} : lo_open;
        pts.push_back(prev);
    }

    std::sort(pts.begin(), pts.end(), [](const Point& x, const Point& y) {
        return x.rho < y.rho || (x.rho == y.rho && x.value > y.value);
    });
    std::vector<double> rs, vs;
    Point first_positive{0.0, top};
    for (const Point& p : pts) {
        if (p.rho > 0.0) {
            first_positive = p;
            break;
        }
    }
    // Sliver node near the origin when the maximum is attained on a null set.
    const double r_in = std::min(u.radii().front(), first_positive.rho) * 1e-6;
    if (first_positive.rho > 0.0 && first_positive.value < top) {
        rs.push_back(r_in);
        vs.push_back(top + (first_positive.value - top) * (r_in / first_positive.rho));
    }
    for (const Point& p : pts) {
        if (!(p.rho > 0.0)) continue;
        if (!rs.empty() && p.rho <= rs.back()) continue;
        double v = p.value;
        if (!vs.empty() && v > vs.back()) {
            if (v - vs.back() > 1e-9 * top) throw std::logic_error("rearrange: non-monotone output");
            v = vs.back();
        }
        rs.push_back(p.rho);
        vs.push_back(v);
    }
    if (rs.empty()) return RadialProfile({u.radii().front()}, {0.0});
    return RadialProfile(std::move(rs), std::move(vs));
}

double weighted_power_integral(const AdmissibleDensity& g, const RadialProfile& u, double p,
                               const std::function<double(double)>& extra,
                               const std::function<double(double)>& extra_head) {
    const double omega = unit_sphere_measure(g.dimension());
    const int n = g.dimension();
    double head = 0.0;
    const double u0 = std::abs(u.values()[0]);
    if (u0 != 0.0) {
        const double r0 = u.radii()[0];
        if (extra && extra_head) {
            head = omega * std::pow(u0, p) * extra_head(r0);
        } else if (extra) {
            head = omega * std::pow(u0, p) *
                   integrate_to_zero([&](double s) { return extra(s) * g(s) * std::pow(s, n - 1); }, r0);
        } else {
            head = std::pow(u0, p) * g.ball_measure(r0);
        }
    }
    const std::vector<double> bp = breakpoints(u);
    return head + piecewise_integral(
                      g, bp,
                      [&](double r) {
                          const double val = std::pow(std::abs(u(r)), p);
                          return extra ? val * extra(r) : val;
                      },
                      omega);
}

double weighted_gradient_integral(const AdmissibleDensity& g, const RadialProfile& u, double p) {
    const double omega = unit_sphere_measure(g.dimension());
    const int n = g.dimension();
    const auto r = u.radii();
    std::vector<std::pair<double, double>> pieces;
    std::vector<double> weight;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double s = u.slope(i);
        if (s == 0.0) continue;
        pieces.emplace_back(r[i], r[i + 1]);
        weight.push_back(std::pow(std::abs(s), p));
    }
    if (pieces.empty()) return 0.0;
    return omega * quad::integrate_pieces_log(
                       [&](double x) {
                           const double gv = g(x);
                           if (!(gv > 0.0)) {
                               throw DomainError("degenerate density: g vanishes where the gradient does not");
                           }
                           // |slope|^p, piecewise constant; locate the segment containing x.
                           const auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                                                            [](double v, const auto& pc) { return v < pc.first; });
                           const std::size_t k = it == pieces.begin() ? 0 : static_cast<std::size_t>(it - pieces.begin()) - 1;
                           return weight[k] * std::pow(gv, 1.0 - p) * std::pow(x, n - 1);
                       },
                       pieces).value;
}

std::pair<double, double> check_norm_preservation(const AdmissibleDensity& g, const RadialProfile& u, double p) {
    const RadialProfile ru = rearrange(g, u);
    return {weighted_power_integral(g, u, p), weighted_power_integral(g, ru, p)};
}

namespace {

double product_integral(const AdmissibleDensity& g, const RadialProfile& u, const RadialProfile& v) {
    const double omega = unit_sphere_measure(g.dimension());
    std::vector<double> bp = breakpoints(u);
    const std::vector<double> bv = breakpoints(v);
    bp.insert(bp.end(), bv.begin(), bv.end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    const double r0 = bp.front();
    const double head = std::abs(u(r0) * v(r0)) * g.ball_measure(r0);
    return head + piecewise_integral(g, bp, [&](double r) { return std::abs(u(r) * v(r)); }, omega);
}

} // namespace

std::pair<double, double> check_hardy_littlewood(const AdmissibleDensity& g, const RadialProfile& u,
                                                 const RadialProfile& v) {
    const RadialProfile ru = rearrange(g, u);
    const RadialProfile rv = rearrange(g, v);
    return {product_integral(g, u, v), product_integral(g, ru, rv)};
}

std::pair<double, double> check_polya_szego(const AdmissibleDensity& g, const RadialProfile& u, double p) {
    const RadialProfile ru = rearrange(g, u);
    return {weighted_gradient_integral(g, u, p), weighted_gradient_integral(g, ru, p)};
}

std::pair<double, double> quotient_comparison(const AdmissibleDensity& g, const std::function<double(double)>& v,
                                              const RadialProfile& u, double p, double q,
                                              const std::function<double(double)>& v_head) {
    auto quotient = [&](const RadialProfile& w) {
        const double den = weighted_power_integral(g, w, q, v, v_head);
        if (!(den > 0.0)) throw DomainError("quotient_comparison: zero denominator");
        return weighted_gradient_integral(g, w, p) / std::pow(den, p / q);
    };
    return {quotient(u), quotient(rearrange(g, u))};
}

std::vector<RearrangementRow> tabulate_rearrangement(const AdmissibleDensity& g, const RadialProfile& u,
                                                     const std::vector<double>& rs) {
    const RadialProfile ru = rearrange(g, u);
    std::vector<RearrangementRow> rows;
    rows.reserve(rs.size());
    for (double r : rs) rows.push_back({r, u(r), ru(r)});
    return rows;
}

} // namespace slhardy
