#include "multavg/quadrature.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <sstream>
#include <vector>

#include "multavg/errors.hpp"

namespace multavg {
namespace {

// Kronrod 15-point nodes (non-negative half) and weights; every other node
// is a 7-point Gauss node.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    Complex value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const ScalarIntegrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const Complex fc = f(center);
    Complex kronrod = fc * kKronrod[7];
    Complex gauss = fc * kGauss[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const Complex pair = f(center - dx) + f(center + dx);
        kronrod += pair * kKronrod[i];
        if (i % 2 == 1) gauss += pair * kGauss[i / 2];
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

QuadratureResult integrate(const ScalarIntegrand& f, double a, double b,
                           const QuadratureOptions& opts) {
    if (!(b > a)) {
        if (a == b) return {};
        throw InvalidArgument("integrate: require a <= b");
    }
    std::priority_queue<Panel> queue;
    Panel first = gauss_kronrod(f, a, b);
    double total_error = first.error;
    queue.push(first);
    std::size_t count = 1;
    while (total_error > opts.abs_tol) {
        if (count >= opts.max_intervals) {
            std::ostringstream msg;
            msg << "quadrature did not converge: achieved error " << total_error
                << " > tolerance " << opts.abs_tol << " after " << count << " panels";
            throw NumericFailure(msg.str(), total_error);
        }
        Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break; // interval at machine resolution
        queue.pop();
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++count;
    }
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    CompensatedComplexSum value;
    double err = 0.0;
    for (const auto& p : panels) {
        value.add(p.value);
        err += p.error;
    }
    if (err > opts.abs_tol) {
        std::ostringstream msg;
        msg << "quadrature stalled at machine resolution: achieved error " << err;
        throw NumericFailure(msg.str(), err);
    }
    return {value.value(), err, panels.size()};
}

QuadratureResult integrate_unit_cube(const BoxIntegrand& f, std::size_t dim,
                                     const QuadratureOptions& opts) {
    if (dim < 1 || dim > 3) throw InvalidArgument("integrate_unit_cube: dimension must be 1..3");
    std::array<double, 3> point{};
    std::size_t total_panels = 0;

    // Inner levels get a tighter tolerance so their errors do not dominate.
    std::function<QuadratureResult(std::size_t, double)> level = [&](std::size_t axis, double tol) {
        QuadratureOptions local = opts;
        local.abs_tol = tol;
        ScalarIntegrand g;
        if (axis + 1 == dim) {
            g = [&, axis](double x) {
                point[axis] = x;
                return f(std::span<const double>(point.data(), dim));
            };
        } else {
            g = [&, axis, tol](double x) {
                point[axis] = x;
                return level(axis + 1, 0.25 * tol).value;
            };
        }
        QuadratureResult r = integrate(g, 0.0, 1.0, local);
        total_panels += r.intervals;
        return r;
    };
    QuadratureResult out = level(0, opts.abs_tol * 0.5);
    out.intervals = total_panels;
    return out;
}

} // namespace multavg
