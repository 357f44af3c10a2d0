#include "gabor/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gabor {

namespace {

constexpr std::array<double, 5> kGlNode = {
    0.1488743389816312108848260,
    0.4333953941292471907992659,
    0.6794095682990244062343274,
    0.8650633666889845107320967,
    0.9739065285171717200779640,
};
constexpr std::array<double, 5> kGlWeight = {
    0.2955242247147528701738930,
    0.2692667193099963550912269,
    0.2190863625159820439955349,
    0.1494513491505805931457763,
    0.0666713443086881375935688,
};

}  // namespace

QuadratureSpec QuadratureSpec::for_window(const Window& psi, double tail_tol) {
    QuadratureSpec q;
    q.tail_tol = tail_tol;
    q.support_cutoff = psi.envelope.radius_for(tail_tol * 1e-3);
    return q;
}

std::vector<double> panel_edges(double a, double b, double width_cap,
                                std::span<const double> breakpoints) {
    std::vector<double> seams;
    seams.push_back(a);
    for (double t : breakpoints)
        if (t > a && t < b) seams.push_back(t);
    seams.push_back(b);
    std::sort(seams.begin(), seams.end());
    seams.erase(std::unique(seams.begin(), seams.end()), seams.end());

    std::vector<double> edges;
    edges.push_back(seams.front());
    for (std::size_t i = 0; i + 1 < seams.size(); ++i) {
        double lo = seams[i], hi = seams[i + 1];
        double len = hi - lo;
        if (len <= 0) continue;
        int parts = std::max(1, static_cast<int>(std::ceil(len / width_cap)));
        for (int p = 1; p <= parts; ++p)
            edges.push_back(lo + len * static_cast<double>(p) / parts);
    }
    return edges;
}

std::vector<double> halve_edges(const std::vector<double>& edges) {
    std::vector<double> out;
    out.reserve(edges.size() * 2);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        out.push_back(edges[i]);
        out.push_back(0.5 * (edges[i] + edges[i + 1]));
    }
    out.push_back(edges.back());
    return out;
}

NodeSet nodes_from_edges(const std::vector<double>& edges) {
    NodeSet ns;
    const std::size_t panels = edges.size() > 0 ? edges.size() - 1 : 0;
    ns.t.reserve(panels * 10);
    ns.w.reserve(panels * 10);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double mid = 0.5 * (edges[i] + edges[i + 1]);
        double half = 0.5 * (edges[i + 1] - edges[i]);
        if (!(half > 0)) continue;
        // ascending node order, so callers can select index ranges
        for (std::size_t j = kGlNode.size(); j-- > 0;) {
            ns.t.push_back(mid - half * kGlNode[j]);
            ns.w.push_back(half * kGlWeight[j]);
        }
        for (std::size_t j = 0; j < kGlNode.size(); ++j) {
            ns.t.push_back(mid + half * kGlNode[j]);
            ns.w.push_back(half * kGlWeight[j]);
        }
    }
    return ns;
}

QuadratureResult integrate_refining(const std::function<cplx(double)>& f,
                                    std::vector<double> edges,
                                    const QuadratureSpec& spec) {
    auto pass = [&f](const std::vector<double>& e) {
        NodeSet ns = nodes_from_edges(e);
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < ns.t.size(); ++i) acc += ns.w[i] * f(ns.t[i]);
        return acc;
    };

    cplx prev = pass(edges);
    for (int level = 1; level <= spec.max_halvings; ++level) {
        edges = halve_edges(edges);
        cplx cur = pass(edges);
        double diff = std::abs(cur - prev);
        if (diff <= spec.tail_tol * std::max(1.0, std::abs(cur)))
            return {cur, diff, level};
        prev = cur;
    }
    throw NumericError("quadrature did not stabilize to tail tolerance after " +
                           std::to_string(spec.max_halvings) + " refinements",
                       prev, pass(halve_edges(edges)));
}

double effective_cutoff(const SignalModel& f, const Window& psi, double center,
                        const QuadratureSpec& spec) {
    const double tol = spec.tail_tol * 1e-2;
    double r = spec.support_cutoff;
    const double r_max = 60.0;
    while (r < r_max) {
        double tail = psi.envelope.value(r) * f.growth.bound(std::abs(center) + r);
        if (tail <= tol) break;
        r += 0.5;
    }
    return r;
}

}  // namespace gabor
