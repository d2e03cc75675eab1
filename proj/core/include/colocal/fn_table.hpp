#pragma once

#include <colocal/error.hpp>
#include <colocal/scalar.hpp>
#include <colocal/state_space.hpp>

#include <algorithm>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace colocal {

/// A function on S^Λ stored densely in mixed-radix index order.
template <class T>
class FnTable {
public:
    using value_type = T;

    FnTable() = default;
    explicit FnTable(ConfigSpace space) : space_(std::move(space)), values_(space_.size(), T(0)) {}
    FnTable(ConfigSpace space, std::vector<T> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (values_.size() != space_.size())
            throw Error(Errc::InvalidInput, "table length " + std::to_string(values_.size()) +
                                                " does not match |S|^|Λ| = " +
                                                std::to_string(space_.size()));
    }

    static FnTable constant(ConfigSpace space, const T& c) {
        FnTable f(std::move(space));
        std::fill(f.values_.begin(), f.values_.end(), c);
        return f;
    }

    /// Tabulates fn(states) over every configuration.
    static FnTable tabulate(ConfigSpace space,
                            const std::function<T(std::span<const State>)>& fn) {
        FnTable f(std::move(space));
        for (ConfigIndex i = 0; i < f.size(); ++i) {
            const auto states = f.space_.decode(i);
            f.values_[i] = fn(states);
        }
        return f;
    }

    /// f(η) = per_state[η_x].
    static FnTable site_function(ConfigSpace space, SiteId site, std::span<const T> per_state) {
        const auto pos = space.sites().position(site);
        if (!pos) throw Error(Errc::NotSubset, "site " + std::to_string(site) + " not in table");
        FnTable f(std::move(space));
        for (ConfigIndex i = 0; i < f.size(); ++i) f.values_[i] = per_state[f.space_.digit(i, *pos)];
        return f;
    }

    const ConfigSpace& space() const noexcept { return space_; }
    const SiteSet& sites() const noexcept { return space_.sites(); }
    ConfigIndex size() const noexcept { return values_.size(); }
    const std::vector<T>& values() const noexcept { return values_; }
    std::vector<T>& values() noexcept { return values_; }

    const T& operator[](ConfigIndex i) const { return values_[i]; }
    T& operator[](ConfigIndex i) { return values_[i]; }
    const T& at(const Config& config) const { return values_[space_.index_of(config)]; }

    bool is_zero() const {
        return std::all_of(values_.begin(), values_.end(), [](const T& v) { return colocal::is_zero(v); });
    }

    /// Same site set and (approximately, in float mode) equal values.
    bool equals(const FnTable& other) const {
        if (!(space_ == other.space_)) return false;
        for (ConfigIndex i = 0; i < size(); ++i)
            if (!approx_equal(values_[i], other.values_[i])) return false;
        return true;
    }

    /// The same function regarded on a larger site set.
    FnTable lift(const ConfigSpace& larger) const {
        const Projection pr(larger, space_);
        FnTable out(larger);
        for (ConfigIndex i = 0; i < out.size(); ++i) out.values_[i] = values_[pr(i)];
        return out;
    }

    FnTable& operator+=(const FnTable& rhs) {
        check_same(rhs);
        for (ConfigIndex i = 0; i < size(); ++i) values_[i] += rhs.values_[i];
        return *this;
    }
    FnTable& operator-=(const FnTable& rhs) {
        check_same(rhs);
        for (ConfigIndex i = 0; i < size(); ++i) values_[i] -= rhs.values_[i];
        return *this;
    }
    FnTable& operator*=(const T& c) {
        for (auto& v : values_) v *= c;
        return *this;
    }
    FnTable& operator+=(const T& c) {
        for (auto& v : values_) v += c;
        return *this;
    }

    friend FnTable operator+(FnTable a, const FnTable& b) { return a += b; }
    friend FnTable operator-(FnTable a, const FnTable& b) { return a -= b; }
    friend FnTable operator*(FnTable a, const T& c) { return a *= c; }
    friend FnTable operator*(const T& c, FnTable a) { return a *= c; }

    /// Pointwise product.
    friend FnTable operator*(const FnTable& a, const FnTable& b) {
        a.check_same(b);
        FnTable out(a.space_);
        for (ConfigIndex i = 0; i < a.size(); ++i) out.values_[i] = a.values_[i] * b.values_[i];
        return out;
    }

private:
    void check_same(const FnTable& rhs) const {
        if (!(space_ == rhs.space_))
            throw Error(Errc::SiteSetMismatch, "tables live on different site sets");
    }

    ConfigSpace space_;
    std::vector<T> values_;
};

/// Converts an exact table to another scalar field.
template <class U>
FnTable<U> convert_table(const FnTable<Rational>& f) {
    std::vector<U> values;
    values.reserve(f.size());
    for (const auto& v : f.values()) values.push_back(scalar_traits<U>::from_rational(v));
    return FnTable<U>(f.space(), std::move(values));
}

}  // namespace colocal
