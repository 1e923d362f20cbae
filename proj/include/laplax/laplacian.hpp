#pragma once

#include <span>
#include <variant>

#include "laplax/graph.hpp"

namespace laplax {

// y = L x over an explicit edge list. Fixed accumulation order keeps results
// bit-stable run to run.
inline void apply_laplacian(const WeightedGraph& g, std::span<const double> x,
                            std::span<double> y, WorkCounter* wc = nullptr) {
    require(int(x.size()) == g.vertex_count() && y.size() == x.size(),
            "dimension mismatch in Laplacian apply");
    for (double& yi : y) yi = 0.0;
    for (const Edge& e : g.edges()) {
        double d = e.w * (x[std::size_t(e.u)] - x[std::size_t(e.v)]);
        y[std::size_t(e.u)] += d;
        y[std::size_t(e.v)] -= d;
    }
    if (wc) wc->touch(std::uint64_t(g.edge_count()));
}

inline double quadratic_form(const WeightedGraph& g, std::span<const double> x) {
    require(int(x.size()) == g.vertex_count(), "dimension mismatch in quadratic form");
    KahanSum s;
    for (const Edge& e : g.edges()) {
        double d = x[std::size_t(e.u)] - x[std::size_t(e.v)];
        s.add(e.w * d * d);
    }
    return s.value();
}

inline void apply_laplacian(const SampleGraph& h, std::span<const double> x,
                            std::span<double> y, WorkCounter* wc = nullptr) {
    require(int(x.size()) == h.n && y.size() == x.size(), "dimension mismatch in Laplacian apply");
    for (double& yi : y) yi = 0.0;
    for (const Edge& e : h.tree_edges) {
        double d = e.w * (x[std::size_t(e.u)] - x[std::size_t(e.v)]);
        y[std::size_t(e.u)] += d;
        y[std::size_t(e.v)] -= d;
    }
    for (const Sample& s : h.samples) {
        double d = s.w * (x[std::size_t(s.u)] - x[std::size_t(s.v)]);
        y[std::size_t(s.u)] += d;
        y[std::size_t(s.v)] -= d;
    }
    if (wc) wc->touch(std::uint64_t(h.multi_edge_count()));
}

inline double quadratic_form(const SampleGraph& h, std::span<const double> x) {
    require(int(x.size()) == h.n, "dimension mismatch in quadratic form");
    KahanSum s;
    for (const Edge& e : h.tree_edges) {
        double d = x[std::size_t(e.u)] - x[std::size_t(e.v)];
        s.add(e.w * d * d);
    }
    for (const Sample& smp : h.samples) {
        double d = x[std::size_t(smp.u)] - x[std::size_t(smp.v)];
        s.add(smp.w * d * d);
    }
    return s.value();
}

// Polymorphic view of a Laplacian: product and quadratic form over either a
// simple graph or a graph of samples. Non-owning.
class LaplacianOperator {
public:
    explicit LaplacianOperator(const WeightedGraph& g) : ref_(&g) {}
    explicit LaplacianOperator(const SampleGraph& h) : ref_(&h) {}

    int dim() const {
        if (auto* g = std::get_if<const WeightedGraph*>(&ref_)) return (*g)->vertex_count();
        return std::get<const SampleGraph*>(ref_)->n;
    }

    void apply(std::span<const double> x, std::span<double> y, WorkCounter* wc = nullptr) const {
        if (auto* g = std::get_if<const WeightedGraph*>(&ref_))
            apply_laplacian(**g, x, y, wc);
        else
            apply_laplacian(*std::get<const SampleGraph*>(ref_), x, y, wc);
    }

    double quad(std::span<const double> x) const {
        if (auto* g = std::get_if<const WeightedGraph*>(&ref_)) return quadratic_form(**g, x);
        return quadratic_form(*std::get<const SampleGraph*>(ref_), x);
    }

private:
    std::variant<const WeightedGraph*, const SampleGraph*> ref_;
};

// Mean-zero projection per component list; with one component this removes
// the all-ones kernel direction.
inline void project_mean_zero(std::span<double> x) {
    KahanSum s;
    for (double xi : x) s.add(xi);
    double mean = x.empty() ? 0.0 : s.value() / double(x.size());
    for (double& xi : x) xi -= mean;
}

} // namespace laplax
