#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace adaptba::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_intervals = 2000;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gauss_kronrod(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T kron = fc * kWk[7];
    T gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXk[static_cast<std::size_t>(j)];
        const T s = f(c - dx) + f(c + dx);
        kron += s * kWk[static_cast<std::size_t>(j)];
        if (j % 2 == 1) gauss += s * kWg[static_cast<std::size_t>(j / 2)];
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval. Works for
/// real or complex integrands; the endpoint values are never evaluated.
template <class T = double, class F>
Result<T> integrate(F&& f, double a, double b, const Options& opt = {}) {
    std::priority_queue<detail::Segment<T>> heap;
    auto first = detail::gauss_kronrod<T>(f, a, b);
    T total = first.value;
    double err = first.error;
    heap.push(first);
    int n = 1;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) && n < opt.max_intervals) {
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        auto left = detail::gauss_kronrod<T>(f, worst.a, mid);
        auto right = detail::gauss_kronrod<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n;
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    T sum{};
    double esum = 0.0;
    for (; !heap.empty(); heap.pop()) {
        sum += heap.top().value;
        esum += heap.top().error;
    }
    Result<T> r;
    r.value = sum;
    r.error = esum;
    r.intervals = n;
    r.converged = esum <= std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
    return r;
}

}  // namespace adaptba::quad
