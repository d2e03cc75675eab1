#pragma once

#include <colocal/fn_table.hpp>
#include <colocal/measure.hpp>

#include <vector>

namespace colocal {

template <class T>
struct L2Norm {
    T squared;    // E_μ[f²], exact in rational mode
    double root;  // float square root
};

template <class T>
L2Norm<T> l2_norm(const FnTable<T>& f, const WindowMeasure<T>& mu);
template <class T>
L2Norm<T> l2_norm(const FnTable<T>& f, const ProductMeasure<T>& mu);

/// Norms of the martingale f_n = π^{Λ_n} f along a nested chain.
template <class T>
struct MartingaleReport {
    std::vector<SiteSet> windows;
    std::vector<L2Norm<T>> norms;  // ‖f_n‖
    std::vector<L2Norm<T>> gaps;   // ‖f_{n+1} - f_n‖, measured on Λ_{n+1}
    L2Norm<T> sup{};               // max_n ‖f_n‖
    bool monotone = true;          // ‖f_n‖ nondecreasing
    bool pythagoras = true;        // ‖f_{n+1}‖² = ‖f_n‖² + ‖f_{n+1} - f_n‖²
};

/// Throws NotSubset if the chain is not nested or f is not on its last window.
template <class T>
MartingaleReport<T> martingale_chain_report(const FnTable<T>& f, const std::vector<SiteSet>& chain,
                                            const ProductMeasure<T>& mu);

}  // namespace colocal
