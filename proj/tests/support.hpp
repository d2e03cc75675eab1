#pragma once

#include <colocal/forms.hpp>
#include <colocal/functions.hpp>
#include <colocal/measure.hpp>
#include <colocal/state_space.hpp>

#include <doctest.h>

#include <set>
#include <string_view>
#include <vector>

namespace support {

using colocal::Rational;
using Q = Rational;

inline Q q(std::string_view text) { return colocal::parse_rational(text); }

// Sites 0..n-1 joined in a line.
inline colocal::Locale path(std::size_t n) {
    std::vector<colocal::SiteId> sites;
    std::vector<colocal::Edge> edges;
    for (std::size_t i = 0; i < n; ++i) sites.push_back(static_cast<colocal::SiteId>(i));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        edges.push_back({static_cast<colocal::SiteId>(i), static_cast<colocal::SiteId>(i + 1)});
        edges.push_back({static_cast<colocal::SiteId>(i + 1), static_cast<colocal::SiteId>(i)});
    }
    return colocal::Locale::build(sites, edges);
}

inline colocal::Locale triangle() {
    return colocal::Locale::build({0, 1, 2}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}});
}

inline colocal::ProductMeasure<Q> half() {
    return colocal::ProductMeasure<Q>(colocal::StateMeasure<Q>::bernoulli(Q(1, 2)));
}

inline colocal::ConfigSpace space(std::vector<colocal::SiteId> sites, std::size_t n = 2) {
    return colocal::ConfigSpace(colocal::SiteSet(std::move(sites)), n);
}

// Table of fn(states) with states in site order.
template <class F>
colocal::FnTable<Q> table(const colocal::ConfigSpace& s, F fn) {
    return colocal::FnTable<Q>::tabulate(s, [&](std::span<const colocal::State> st) { return Q(fn(st)); });
}

inline colocal::FnTable<Q> random_table(const colocal::ConfigSpace& s, auto& rng) {
    return colocal::FnTable<Q>(s, rng.values(s.size()));
}

#define CHECK_ERRC(expr, errc)                                              \
    do {                                                                    \
        bool thrown_ = false;                                               \
        try {                                                               \
            (void)(expr);                                                   \
        } catch (const colocal::Error& e_) {                                \
            thrown_ = true;                                                 \
            CHECK_MESSAGE(e_.code() == (errc), e_.name() << ": " << e_.what()); \
        }                                                                   \
        CHECK_MESSAGE(thrown_, "expected " << colocal::errc_name(errc));   \
    } while (0)

}  // namespace support
