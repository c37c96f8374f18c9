#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "levyx/errors.hpp"

namespace levyx {

using cplx = std::complex<double>;

template <class T, int MaxLen>
class BasicJet;

template <class T, int MaxLen>
BasicJet<T, MaxLen> exp(const BasicJet<T, MaxLen>& f);
template <class T, int MaxLen>
BasicJet<T, MaxLen> log(const BasicJet<T, MaxLen>& f);
template <class T, int MaxLen>
BasicJet<T, MaxLen> sqrt(const BasicJet<T, MaxLen>& f);

namespace detail {
inline cplx exp_of(const cplx& z) { return std::exp(z); }
inline cplx log_of(const cplx& z) { return std::log(z); }
inline cplx sqrt_of(const cplx& z) { return std::sqrt(z); }
template <class T, int M>
BasicJet<T, M> exp_of(const BasicJet<T, M>& j) { return exp(j); }
template <class T, int M>
BasicJet<T, M> log_of(const BasicJet<T, M>& j) { return log(j); }
template <class T, int M>
BasicJet<T, M> sqrt_of(const BasicJet<T, M>& j) { return sqrt(j); }
} // namespace detail

// Truncated Taylor series ("jet") of a function of the Fourier variable about
// a fixed, possibly complex, center.  coeff(k) = f^(k)(center)/k!.  All
// arithmetic is closed at a fixed center; mixing centers throws JetError.
// Multiplication truncates at the shorter operand's order, so the value
// coordinate stays exact as long as the initial derivative budget covers the
// total number of d/dxi applications.
//
// The coefficient type is a template parameter: BasicJet<cplx> is the
// workhorse; BasicJet<BasicJet<cplx>> gives exact spatial Taylor coefficients
// of symbol families (a jet in x whose coefficients are jets in xi).
template <class T, int MaxLen = 16>
class BasicJet {
public:
    static constexpr int max_order = MaxLen - 1;

    BasicJet() : center_(0.0), len_(1) {}

    BasicJet(cplx center, int order) : center_(center), len_(order + 1) {
        if (order < 0 || order > max_order)
            throw JetError("jet order out of range: " + std::to_string(order));
    }

    static BasicJet constant(const T& v, cplx center, int order) {
        BasicJet j(center, order);
        j.c_[0] = v;
        return j;
    }

    // The identity map xi -> xi as a jet about `center`.
    static BasicJet variable(cplx center, int order);

    int order() const { return len_ - 1; }
    cplx center() const { return center_; }

    const T& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    T& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

    const T& value() const { return c_[0]; }

    // d/dxi: coefficients shift down, order drops by one.
    BasicJet derivative() const {
        if (order() == 0)
            throw JetError("jet derivative: budget exhausted");
        BasicJet out(center_, order() - 1);
        for (int k = 0; k < len_ - 1; ++k)
            out.c_[k] = static_cast<double>(k + 1) * c_[k + 1];
        return out;
    }

    BasicJet truncated(int order) const {
        BasicJet out(center_, std::min(order, this->order()));
        for (int k = 0; k <= out.order(); ++k) out.c_[k] = c_[k];
        return out;
    }

    BasicJet& operator+=(const BasicJet& g) {
        match(g);
        len_ = std::min(len_, g.len_);
        for (int k = 0; k < len_; ++k) c_[k] += g.c_[k];
        return *this;
    }
    BasicJet& operator-=(const BasicJet& g) {
        match(g);
        len_ = std::min(len_, g.len_);
        for (int k = 0; k < len_; ++k) c_[k] -= g.c_[k];
        return *this;
    }
    friend BasicJet operator+(BasicJet f, const BasicJet& g) { return f += g; }
    friend BasicJet operator-(BasicJet f, const BasicJet& g) { return f -= g; }

    BasicJet operator-() const {
        BasicJet out = *this;
        for (int k = 0; k < len_; ++k) out.c_[k] = -out.c_[k];
        return out;
    }

    // Cauchy product, truncated at min(order, g.order).
    friend BasicJet operator*(const BasicJet& f, const BasicJet& g) {
        f.match(g);
        BasicJet out(f.center_, std::min(f.order(), g.order()));
        for (int k = 0; k <= out.order(); ++k) {
            T acc = f.c_[0] * g.c_[k];
            for (int j = 1; j <= k; ++j) acc += f.c_[j] * g.c_[k - j];
            out.c_[k] = acc;
        }
        return out;
    }

    template <class S>
    BasicJet& operator*=(const S& s) {
        for (int k = 0; k < len_; ++k) c_[k] = c_[k] * s;
        return *this;
    }
    template <class S>
    friend BasicJet operator*(BasicJet f, const S& s) { return f *= s; }
    template <class S>
    friend BasicJet operator*(const S& s, BasicJet f) { return f *= s; }

    BasicJet& operator+=(const T& s) { c_[0] += s; return *this; }
    BasicJet& operator-=(const T& s) { c_[0] -= s; return *this; }

    // Evaluate the truncated polynomial at xi (Horner in xi - center).
    T eval(cplx xi) const {
        cplx u = xi - center_;
        T acc = c_[len_ - 1];
        for (int k = len_ - 2; k >= 0; --k) acc = acc * u + c_[k];
        return acc;
    }

private:
    void match(const BasicJet& g) const {
        if (center_ != g.center_)
            throw JetError("jet center mismatch");
    }

    cplx center_;
    int len_;
    std::array<T, MaxLen> c_{};
};

template <class T, int MaxLen>
BasicJet<T, MaxLen> BasicJet<T, MaxLen>::variable(cplx center, int order) {
    BasicJet j(center, order);
    j[0] = T{} + center;
    if (order >= 1) j[1] = T{} + cplx(1.0, 0.0);
    return j;
}

// exp via g' = g f', integrated term by term.
template <class T, int MaxLen>
BasicJet<T, MaxLen> exp(const BasicJet<T, MaxLen>& f) {
    BasicJet<T, MaxLen> g(f.center(), f.order());
    g[0] = detail::exp_of(f[0]);
    for (int k = 1; k <= f.order(); ++k) {
        T acc = g[0] * (static_cast<double>(k) * f[k]);
        for (int j = 1; j < k; ++j)
            acc += g[j] * (static_cast<double>(k - j) * f[k - j]);
        g[k] = acc * (1.0 / static_cast<double>(k));
    }
    return g;
}

template <class T, int MaxLen>
BasicJet<T, MaxLen> log(const BasicJet<T, MaxLen>& f) {
    BasicJet<T, MaxLen> g(f.center(), f.order());
    g[0] = detail::log_of(f[0]);
    for (int k = 1; k <= f.order(); ++k) {
        T acc = static_cast<double>(k) * f[k];
        for (int j = 1; j < k; ++j)
            acc -= (static_cast<double>(j) * g[j]) * f[k - j];
        g[k] = acc * (1.0 / static_cast<double>(k)) * (1.0 / f[0]);
    }
    return g;
}

// Principal-branch square root; the caller is responsible for keeping the
// base point away from the cut (see BranchError checks in the NIG family).
template <class T, int MaxLen>
BasicJet<T, MaxLen> sqrt(const BasicJet<T, MaxLen>& f) {
    BasicJet<T, MaxLen> g(f.center(), f.order());
    g[0] = detail::sqrt_of(f[0]);
    for (int k = 1; k <= f.order(); ++k) {
        T acc = f[k];
        for (int j = 1; j < k; ++j) acc -= g[j] * g[k - j];
        g[k] = acc * (0.5 / g[0]);
    }
    return g;
}

// Evaluate a polynomial with coefficients p[0..n] (in the jet variable's
// deviation from zero, i.e. p(f) with f a jet) by Horner's rule.
template <class T, int MaxLen, class Coeff>
BasicJet<T, MaxLen> polyval(const Coeff* p, int n, const BasicJet<T, MaxLen>& f) {
    BasicJet<T, MaxLen> acc =
        BasicJet<T, MaxLen>::constant(T{} + cplx(p[n]), f.center(), f.order());
    for (int k = n - 1; k >= 0; --k) {
        acc = acc * f;
        acc += T{} + cplx(p[k]);
    }
    return acc;
}

using Jet = BasicJet<cplx>;

// Jet in x whose coefficients are jets in xi.  Used to carry exact spatial
// Taylor coefficients of (t,x,xi)-symbols.
using XJet = BasicJet<Jet>;

} // namespace levyx
