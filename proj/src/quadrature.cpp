#include "slhardy/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "slhardy/errors.hpp"

namespace slhardy::quad {

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kGl8x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                             -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                             0.7966664774136267,  0.9602898564975363};
constexpr double kGl8w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                             0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                             0.2223810344533745, 0.1012285362903763};
constexpr double kGl10x[10] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
                               -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
                               0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
                               0.9739065285171717};
constexpr double kGl10w[10] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
                               0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
                               0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                               0.0666713443086881};

struct Panel {
    double a, b;
    Result r;
    bool operator<(const Panel& o) const { return r.error < o.r.error; }
};

} // namespace

Result gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double pair = f(c - dx) + f(c + dx);
        kronrod += kWgk[i] * pair;
        if (i % 2 == 1) gauss += kWg[i / 2] * pair;
    }
    Result r;
    r.value = kronrod * h;
    r.error = std::abs((kronrod - gauss) * h);
    r.evaluations = 15;
    return r;
}

Result integrate(const Integrand& f, double a, double b, const Options& opt) {
    if (a == b) return {};
    if (b < a) {
        Result r = integrate(f, b, a, opt);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<Panel> heap;
    Result first = gk15(f, a, b);
    heap.push({a, b, first});
    double total = first.value;
    double err = first.error;
    int evals = first.evaluations;
    int panels = 1;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (panels % 256 == 0 || panels >= opt.max_intervals) {
            // Periodic exact re-sum; the running updates drift once err is near roundoff.
            std::priority_queue<Panel> copy = heap;
            double t = 0.0, e = 0.0;
            while (!copy.empty()) {
                t += copy.top().r.value;
                e += copy.top().r.error;
                copy.pop();
            }
            total = t;
            err = e;
            if (!(err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)))) break;
        }
        if (panels >= opt.max_intervals) {
            throw QuadratureError("adaptive quadrature: interval budget exhausted on [" +
                                  std::to_string(a) + ", " + std::to_string(b) +
                                  "], error estimate " + std::to_string(err) + " value " + std::to_string(total));
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureError("adaptive quadrature: panel below machine resolution");
        }
        Result left = gk15(f, worst.a, mid);
        Result right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.r.value;
        err += left.error + right.error - worst.r.error;
        evals += 30;
        heap.push({worst.a, mid, left});
        heap.push({mid, worst.b, right});
        ++panels;
    }
    // Re-sum to shed the drift of the running updates.
    double sum = 0.0;
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().r.value;
        esum += heap.top().r.error;
        heap.pop();
    }
    return {sum, esum, evals};
}

Result integrate_log(const Integrand& f, double a, double b, const Options& opt) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("integrate_log: endpoints must be positive");
    return integrate(
        [&f](double x) {
            const double t = std::exp(x);
            return f(t) * t;
        },
        std::log(a), std::log(b), opt);
}

Result integrate_pieces_log(const Integrand& f, const std::vector<std::pair<double, double>>& pieces,
                            double rel_tol) {
    auto h = [&f](double x) {
        const double t = std::exp(x);
        return f(t) * t;
    };
    std::vector<Result> crude(pieces.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!(pieces[i].first > 0.0) || !(pieces[i].second >= pieces[i].first)) {
            throw DomainError("integrate_pieces_log: pieces must be ordered and positive");
        }
        crude[i] = gk15(h, std::log(pieces[i].first), std::log(pieces[i].second));
        scale += std::abs(crude[i].value);
    }
    const double tol = rel_tol * scale;
    Result out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        Result r = crude[i];
        if (r.error > tol) r = integrate_log(f, pieces[i].first, pieces[i].second, {tol, 1e-13, 4000});
        out.value += r.value;
        out.error += r.error;
        out.evaluations += r.evaluations + 15;
    }
    return out;
}

namespace {

// Clenshaw sum of c[0]/2 + sum_j c[j] T_j(y).
double clenshaw(const std::vector<double>& c, double y) {
    double d = 0.0, dd = 0.0;
    const double y2 = 2.0 * y;
    for (std::size_t j = c.size() - 1; j >= 1; --j) {
        const double sv = d;
        d = y2 * d - dd + c[j];
        dd = sv;
    }
    return y * d - dd + 0.5 * c[0];
}

} // namespace

ChebPrimitive::ChebPrimitive(const Integrand& f, double a, double b) : a_(a), b_(b) {
    constexpr int N = kOrder;
    const double pi = std::numbers::pi;
    std::vector<double> fk(N);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < N; ++k) fk[static_cast<std::size_t>(k)] = f(mid + half * std::cos(pi * (k + 0.5) / N));
    c_.assign(N, 0.0);
    for (int j = 0; j < N; ++j) {
        double s = 0.0;
        for (int k = 0; k < N; ++k) s += fk[static_cast<std::size_t>(k)] * std::cos(pi * j * (k + 0.5) / N);
        c_[static_cast<std::size_t>(j)] = 2.0 * s / N;
    }
    // int T_j = (T_{j+1}/(j+1) - T_{j-1}/(j-1)) / 2, scaled by half
    cint_.assign(N, 0.0);
    double sum = 0.0, sign = 1.0;
    for (int j = 1; j < N; ++j) {
        const double next = j + 1 < N ? c_[static_cast<std::size_t>(j + 1)] : 0.0;
        cint_[static_cast<std::size_t>(j)] = half * (c_[static_cast<std::size_t>(j - 1)] - next) / (2.0 * j);
        sum += sign * cint_[static_cast<std::size_t>(j)];
        sign = -sign;
    }
    cint_[0] = 2.0 * sum;  // primitive vanishes at a
}

double ChebPrimitive::operator()(double x) const {
    return clenshaw(cint_, (2.0 * x - a_ - b_) / (b_ - a_));
}

double ChebPrimitive::integrand(double x) const {
    return clenshaw(c_, (2.0 * x - a_ - b_) / (b_ - a_));
}

GaussRule gauss_legendre(int n) {
    if (n == 8) return {kGl8x, kGl8w, 8};
    if (n == 10) return {kGl10x, kGl10w, 10};
    throw DomainError("gauss_legendre: supported orders are 8 and 10");
}

} // namespace slhardy::quad
