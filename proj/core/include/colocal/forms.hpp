#pragma once

#include <colocal/fn_table.hpp>
#include <colocal/measure.hpp>
#include <colocal/state_space.hpp>

#include <map>
#include <optional>
#include <vector>

namespace colocal {

/// Degree-1 alternating form ω = (ω_e)_{e ∈ E_Λ} on the configuration graph.
///
/// Only the orientation with origin < target of every edge pair {e, ē} is
/// stored; the other one is ω_ē(η) = -ω_e(η^ē). ω_e(η) is 0 whenever
/// η^e = η. Construction validates that stored tables vanish on fixed points
/// and agree across edges producing the same transition.
template <class T>
class Form {
public:
    /// Zero form.
    explicit Form(TransitionGraph graph);

    /// `stored[k]` is the table for stored_edges()[k]. Throws MalformedForm.
    Form(TransitionGraph graph, std::vector<FnTable<T>> stored);

    /// One table per directed edge of E_Λ; the alternating property is
    /// checked as well. Throws MalformedForm.
    static Form from_directed(TransitionGraph graph, const std::map<Edge, FnTable<T>>& tables);

    const TransitionGraph& graph() const noexcept { return graph_; }
    const ConfigSpace& space() const noexcept { return graph_.space(); }
    /// Edge indices (into graph().edges()) of the stored orientations.
    const std::vector<std::uint32_t>& stored_edges() const noexcept { return stored_edges_; }
    const std::vector<FnTable<T>>& stored_tables() const noexcept { return stored_; }

    /// ω_e(η) for any directed edge index.
    T value(std::uint32_t edge, ConfigIndex eta) const;
    T value(const Edge& edge, ConfigIndex eta) const;
    /// Full table of ω_e.
    FnTable<T> table(std::uint32_t edge) const;

    bool is_zero() const;
    bool equals(const Form& other) const;

    Form& operator+=(const Form& rhs);
    Form& operator-=(const Form& rhs);
    Form& operator*=(const T& c);
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(const T& c, Form a) { return a *= c; }

private:
    void index_edges();
    void validate() const;
    void check_same(const Form& rhs) const;

    TransitionGraph graph_;
    std::vector<std::uint32_t> stored_edges_;
    std::vector<std::uint32_t> slot_of_edge_;
    std::vector<FnTable<T>> stored_;
};

/// ∂f = (∇_e f)_e with ∇_e f(η) = f(η^e) - f(η).
template <class T>
Form<T> differential(const FnTable<T>& f, const TransitionGraph& graph);

/// Sequence of transitions starting at `start`.
struct Path {
    ConfigIndex start = 0;
    std::vector<Edge> edges;
};

/// Final configuration of a path. Throws InvalidPath if some step is not a
/// genuine transition.
ConfigIndex path_end(const TransitionGraph& graph, const Path& path);

/// Σ_i ω_{e_i}(η^{i-1}). Throws InvalidPath.
template <class T>
T path_integral(const Form<T>& form, const Path& path);

template <class T>
struct PotentialResult {
    bool closed = false;
    /// f with ∂f = ω and E_μ[f] = 0 when closed.
    std::optional<FnTable<T>> potential;
    /// Closed path with nonzero integral when not closed.
    std::optional<Path> witness;
    std::optional<T> witness_integral;
};

/// Integrates ω along a BFS spanning forest of the transition graph (each
/// component rooted at its smallest configuration index with value 0), checks
/// every non-forest transition, then subtracts E_μ[f].
template <class T>
PotentialResult<T> solve_potential(const Form<T>& form, const WindowMeasure<T>& mu);

/// solve_potential that throws NotClosed instead of returning a witness.
template <class T>
FnTable<T> potential_of(const Form<T>& form, const WindowMeasure<T>& mu);

/// Fundamental cycles of a BFS spanning forest, one per undirected pair of
/// distinct configurations joined by a non-forest transition.
std::vector<Path> cycle_basis(const TransitionGraph& graph);

/// True iff every fundamental cycle integrates to zero.
template <class T>
bool is_closed(const Form<T>& form);

template <class T>
struct KernelBasis {
    std::vector<std::uint32_t> labels;   // component per configuration
    std::vector<FnTable<T>> indicators;  // basis of Ker ∂
    std::vector<FnTable<T>> mean_zero;   // basis of Ker ∂ ∩ C^0

    std::size_t dim_c0 = 0;      // |S^Λ| - 1
    std::size_t dim_kernel = 0;  // components
    std::size_t dim_kernel_c0 = 0;
    std::size_t dim_z1 = 0;      // dim C^0 - dim(Ker ∂ ∩ C^0)
};

template <class T>
KernelBasis<T> kernel_basis(const TransitionGraph& graph, const WindowMeasure<T>& mu);

/// (π^Λ ω)_e = π^Λ(ω_e) for e ∈ E_Λ, with no ordinarity check; the result may
/// fail the form invariants when μ is not ordinary.
template <class T>
std::map<Edge, FnTable<T>> project_edge_tables(const Form<T>& form, const SiteSet& subset,
                                               const WindowMeasure<T>& mu);

/// Form projection under an ordinary measure. Throws NotOrdinary, NotSubset.
template <class T>
Form<T> project_form(const Form<T>& form, const SiteSet& subset, const WindowMeasure<T>& mu);
/// Product measures are always ordinary.
template <class T>
Form<T> project_form(const Form<T>& form, const SiteSet& subset, const ProductMeasure<T>& mu);

/// σ(ω)_{σe}(η) = ω_e(σ^{-1}η) on σ(Λ). Throws ActionLeavesWindow.
template <class T>
Form<T> group_act(const GroupElement& sigma, const Form<T>& form);

}  // namespace colocal
