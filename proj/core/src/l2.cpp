#include <colocal/l2.hpp>

#include <cmath>

namespace colocal {
namespace {

template <class T>
L2Norm<T> from_squared(T squared) {
    const double root = std::sqrt(std::max(0.0, scalar_traits<T>::to_double(squared)));
    return {std::move(squared), root};
}

template <class T>
bool less_or_equal(const T& a, const T& b) {
    return a <= b || approx_equal(a, b);
}

}  // namespace

template <class T>
L2Norm<T> l2_norm(const FnTable<T>& f, const WindowMeasure<T>& mu) {
    return from_squared(inner(f, f, mu));
}

template <class T>
L2Norm<T> l2_norm(const FnTable<T>& f, const ProductMeasure<T>& mu) {
    return l2_norm(f, mu.on(f.space()));
}

template <class T>
MartingaleReport<T> martingale_chain_report(const FnTable<T>& f, const std::vector<SiteSet>& chain,
                                            const ProductMeasure<T>& mu) {
    if (chain.empty()) throw Error(Errc::InvalidInput, "empty chain");
    for (std::size_t i = 1; i < chain.size(); ++i)
        if (!chain[i - 1].is_subset_of(chain[i])) throw Error(Errc::NotSubset, "chain windows are not nested");
    if (!(chain.back() == f.sites())) throw Error(Errc::NotSubset, "the function must live on the last window");

    MartingaleReport<T> report;
    report.windows = chain;
    std::vector<FnTable<T>> steps;
    for (const auto& w : chain) {
        steps.push_back(conditional_expectation(f, w, mu));
        report.norms.push_back(l2_norm(steps.back(), mu));
    }
    report.sup = report.norms.front();
    for (std::size_t n = 0; n < steps.size(); ++n) {
        if (report.sup.squared < report.norms[n].squared) report.sup = report.norms[n];
        if (n + 1 == steps.size()) break;
        FnTable<T> gap = steps[n + 1];
        gap -= steps[n].lift(gap.space());
        report.gaps.push_back(l2_norm(gap, mu));
        report.monotone = report.monotone && less_or_equal(report.norms[n].squared, report.norms[n + 1].squared);
        report.pythagoras = report.pythagoras && approx_equal(report.norms[n + 1].squared,
                                                              T(report.norms[n].squared + report.gaps[n].squared));
    }
    return report;
}

#define COLOCAL_INSTANTIATE(T)                                                        \
    template L2Norm<T> l2_norm(const FnTable<T>&, const WindowMeasure<T>&);           \
    template L2Norm<T> l2_norm(const FnTable<T>&, const ProductMeasure<T>&);          \
    template MartingaleReport<T> martingale_chain_report(const FnTable<T>&, const std::vector<SiteSet>&, \
                                                         const ProductMeasure<T>&);

COLOCAL_INSTANTIATE(Rational)
COLOCAL_INSTANTIATE(double)

}  // namespace colocal
