#include "uf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "uf/error.hpp"

namespace uf {

namespace {

GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

struct TensorSum {
    double sum = 0.0;   // sum of w * (f - fref)
    double l1 = 0.0;    // sum of w * |f - fref|
    std::size_t evals = 0;
    bool finite = true;
};

// Tensor Gauss rule over [lo, hi] applied to f - fref.
TensorSum tensor_rule(const PointFunction& f, double fref, const std::vector<double>& lo,
                      const std::vector<double>& hi, const GaussRule& g, std::vector<double>& x,
                      std::vector<int>& idx) {
    const int dim = static_cast<int>(lo.size());
    const int n = static_cast<int>(g.nodes.size());
    TensorSum out;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
        double w = 1.0;
        for (int a = 0; a < dim; ++a) {
            const double half = 0.5 * (hi[a] - lo[a]);
            x[a] = lo[a] + half * (1.0 + g.nodes[idx[a]]);
            w *= half * g.weights[idx[a]];
        }
        const double v = f(x);
        ++out.evals;
        if (!std::isfinite(v)) {
            out.finite = false;
            return out;
        }
        out.sum += w * (v - fref);
        out.l1 += w * std::abs(v - fref);
        int a = dim - 1;
        while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
        if (a < 0) break;
    }
    return out;
}

struct SubBox {
    std::vector<double> lo, hi;
    double est = 0.0;
    double err = 0.0;
    double l1 = 0.0;
};

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

CubatureResult box_average(const PointFunction& f, std::span<const double> lo_in, std::span<const double> hi_in,
                           const CubatureOptions& opts) {
    const int dim = static_cast<int>(lo_in.size());
    const GaussRule& g = gauss_legendre(opts.points_per_axis);
    std::vector<double> lo(lo_in.begin(), lo_in.end()), hi(hi_in.begin(), hi_in.end());
    double volume = 1.0;
    for (int a = 0; a < dim; ++a) volume *= hi[a] - lo[a];

    CubatureResult res;
    std::vector<double> x(dim);
    std::vector<int> idx(dim);

    // reference value: the first node of the root rule
    for (int a = 0; a < dim; ++a) x[a] = lo[a] + 0.5 * (hi[a] - lo[a]) * (1.0 + g.nodes[0]);
    const double fref = f(x);
    res.evaluations = 1;
    if (!std::isfinite(fref)) {
        res.finite = false;
        res.converged = false;
        res.average = fref;
        return res;
    }

    const std::size_t nchild = std::size_t{1} << dim;
    auto evaluate = [&](SubBox& b) -> bool {
        const TensorSum parent = tensor_rule(f, fref, b.lo, b.hi, g, x, idx);
        res.evaluations += parent.evals;
        if (!parent.finite) return false;
        std::vector<double> clo(dim), chi(dim);
        double est = 0.0, l1 = 0.0;
        for (std::size_t m = 0; m < nchild; ++m) {
            for (int a = 0; a < dim; ++a) {
                const double mid = 0.5 * (b.lo[a] + b.hi[a]);
                const bool upper = (m >> a) & 1u;
                clo[a] = upper ? mid : b.lo[a];
                chi[a] = upper ? b.hi[a] : mid;
            }
            const TensorSum c = tensor_rule(f, fref, clo, chi, g, x, idx);
            res.evaluations += c.evals;
            if (!c.finite) return false;
            est += c.sum;
            l1 += c.l1;
        }
        b.est = est;
        b.l1 = l1;
        b.err = std::abs(parent.sum - est);
        return true;
    };

    std::vector<SubBox> boxes;
    boxes.push_back({lo, hi});
    if (!evaluate(boxes[0])) {
        res.finite = false;
        res.converged = false;
        return res;
    }
    auto worse = [&](std::size_t a, std::size_t b) { return boxes[a].err < boxes[b].err; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
    heap.push(0);

    double total = boxes[0].est, total_err = boxes[0].err, total_l1 = boxes[0].l1;
    auto tolerance = [&] {
        return std::max(opts.rel_tol * std::abs(fref * volume + total), opts.abs_floor * total_l1);
    };
    while (total_err > tolerance() && boxes.size() + nchild - 1 <= opts.max_regions) {
        const std::size_t worst = heap.top();
        heap.pop();
        const SubBox parent = boxes[worst];
        total -= parent.est;
        total_err -= parent.err;
        total_l1 -= parent.l1;
        for (std::size_t m = 0; m < nchild; ++m) {
            SubBox child;
            child.lo.resize(dim);
            child.hi.resize(dim);
            for (int a = 0; a < dim; ++a) {
                const double mid = 0.5 * (parent.lo[a] + parent.hi[a]);
                const bool upper = (m >> a) & 1u;
                child.lo[a] = upper ? mid : parent.lo[a];
                child.hi[a] = upper ? parent.hi[a] : mid;
            }
            if (!evaluate(child)) {
                res.finite = false;
                res.converged = false;
                return res;
            }
            total += child.est;
            total_err += child.err;
            total_l1 += child.l1;
            const std::size_t slot = m == 0 ? worst : boxes.size();
            if (m == 0)
                boxes[worst] = std::move(child);
            else
                boxes.push_back(std::move(child));
            heap.push(slot);
        }
    }

    // exact totals in storage order
    total = 0.0;
    total_err = 0.0;
    total_l1 = 0.0;
    for (const auto& b : boxes) {
        total += b.est;
        total_err += b.err;
        total_l1 += b.l1;
    }
    res.converged = total_err <= tolerance();
    res.average = fref + total / volume;
    res.error = total_err / volume;
    return res;
}

namespace {

struct BallSample {
    double w;
    double v;
};

void ball_slices(const PointFunction& f, std::span<const double> c, int axis, double rho, double wacc,
                 const GaussRule& g, std::vector<double>& x, std::vector<BallSample>& out) {
    const int dim = static_cast<int>(c.size());
    const int n = static_cast<int>(g.nodes.size());
    if (axis == dim - 1) {
        for (int i = 0; i < n; ++i) {
            x[axis] = c[axis] + rho * g.nodes[i];
            out.push_back({wacc * rho * g.weights[i], f(x)});
        }
        return;
    }
    constexpr double half_pi = std::numbers::pi / 2.0;
    for (int i = 0; i < n; ++i) {
        const double theta = half_pi * g.nodes[i];
        const double ct = std::cos(theta);
        x[axis] = c[axis] + rho * std::sin(theta);
        ball_slices(f, c, axis + 1, rho * ct, wacc * half_pi * g.weights[i] * rho * ct, g, x, out);
    }
}

double ball_pass(const PointFunction& f, std::span<const double> c, double r, int n, double& mean_abs) {
    std::vector<double> x(c.size());
    std::vector<BallSample> samples;
    ball_slices(f, c, 0, r, 1.0, gauss_legendre(n), x, samples);
    for (const auto& s : samples)
        if (!std::isfinite(s.v)) throw QuadratureError("non-finite integrand sample in ball average");
    const double fref = samples.front().v;
    double num = 0.0, den = 0.0, abs_sum = 0.0;
    for (const auto& s : samples) {
        num += s.w * (s.v - fref);
        den += s.w;
        abs_sum += s.w * std::abs(s.v);
    }
    mean_abs = abs_sum / den;
    return fref + num / den;
}

}  // namespace

BallAverage ball_average(const PointFunction& f, std::span<const double> center, double r, double rel_tol) {
    if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
    const int dim = static_cast<int>(center.size());
    // cap the total sample count near 2^18
    const int max_nodes = dim == 1 ? 1024 : dim == 2 ? 512 : dim == 3 ? 64 : 16;
    BallAverage out;
    double mean_abs = 0.0;
    int n = 8;
    double prev = ball_pass(f, center, r, n, mean_abs);
    out.value = prev;
    out.nodes = n;
    out.converged = false;
    while (2 * n <= max_nodes) {
        n *= 2;
        const double cur = ball_pass(f, center, r, n, mean_abs);
        out.error = std::abs(cur - prev);
        out.value = cur;
        out.nodes = n;
        if (out.error <= rel_tol * std::max({std::abs(cur), mean_abs, 1e-300})) {
            out.converged = true;
            break;
        }
        prev = cur;
    }
    return out;
}

double ball_volume(int dim, double r) {
    return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0) * std::pow(r, dim);
}

namespace {

// I_n = integral_0^phi sin^n, given sin(phi) and cos(phi).
double sin_power_integral(int n, double phi, double s, double c) {
    double i_even = phi;          // I_0
    double i_odd = 1.0 - c;       // I_1
    if (n == 0) return i_even;
    if (n == 1) return i_odd;
    double prev2 = (n % 2 == 0) ? i_even : i_odd;
    for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) {
        prev2 = -std::pow(s, k - 1) * c / k + (k - 1.0) / k * prev2;
    }
    return prev2;
}

}  // namespace

double cap_fraction(int dim, double q) {
    if (q <= 0.0) return 0.5;
    if (q >= 1.0) return 0.0;
    const double s = std::sqrt((1.0 - q) * (1.0 + q));
    const double part = sin_power_integral(dim, std::acos(q), s, q);
    const double half = sin_power_integral(dim, std::numbers::pi / 2.0, 1.0, 0.0);
    return part / (2.0 * half);
}

namespace {

double ball_box_volume_rec(double r, std::span<const double> lo, std::span<const double> hi) {
    if (lo.size() == 1) return std::max(0.0, std::min(hi[0], r) - std::max(lo[0], -r));
    const double a = std::max(lo[0], -r), b = std::min(hi[0], r);
    if (!(a < b)) return 0.0;

    // Radii at which the inner section changes form: sums of squares taking at
    // most one finite bound per remaining axis.
    std::vector<double> sums{0.0};
    for (std::size_t k = 1; k < lo.size(); ++k) {
        const std::size_t m = sums.size();
        for (double bound : {lo[k], hi[k]}) {
            if (!std::isfinite(bound) || bound == 0.0) continue;
            for (std::size_t i = 0; i < m; ++i) sums.push_back(sums[i] + bound * bound);
        }
    }
    // Slice in the polar angle, t = r cos(theta): the section radius
    // r sin(theta) is then analytic and the only kinks sit at piece ends.
    const double r2 = r * r;
    const auto angle = [&](double t) { return std::atan2(std::sqrt(std::max(0.0, (r - t) * (r + t))), t); };
    const double th_lo = angle(b), th_hi = angle(a);
    std::vector<double> cuts{th_lo, th_hi};
    for (double s : sums) {
        if (s >= r2) continue;
        const double th = std::asin(std::sqrt(s) / r);
        for (double tt : {th, std::numbers::pi - th})
            if (tt > th_lo && tt < th_hi) cuts.push_back(tt);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const GaussRule& g = gauss_legendre(24);
    constexpr double half_pi = std::numbers::pi / 2.0;
    const auto inner_lo = lo.subspan(1), inner_hi = hi.subspan(1);
    double vol = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
        const double w = 0.5 * (cuts[p + 1] - cuts[p]);
        // theta = mid + w sin(psi) smooths square-root behaviour at piece ends
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double psi = half_pi * g.nodes[i];
            const double rho = r * std::sin(mid + w * std::sin(psi));
            if (rho <= 0.0) continue;
            vol += half_pi * g.weights[i] * w * std::cos(psi) * rho * ball_box_volume_rec(rho, inner_lo, inner_hi);
        }
    }
    return vol;
}

}  // namespace

double ball_box_volume(double r, std::span<const double> lo, std::span<const double> hi) {
    if (lo.size() != hi.size() || lo.empty()) throw InvalidArgument("box bounds must have matching nonzero size");
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (!(lo[k] < hi[k])) return 0.0;
    return ball_box_volume_rec(r, lo, hi);
}

}  // namespace uf
