#pragma once

/**
 * @file scan.hpp
 * @brief Exhaustive best-approximation scan over a prime field.
 *
 * Enumerates every pair (p, q) with bounded degree and ramification, q
 * monic (one representative per scalar class; the hypothesis and the
 * approximant property only depend on the value p/q and on deg q), and
 * reports the comaximal pairs satisfying nu(z - p/q) > 2 deg q.
 *
 * The pair test runs in the substituted world u = t^(1/ram) on dense
 * mod-p coefficient arrays: with z = Zn/Zd, the hypothesis is exactly
 * deg_u(Zn q - Zd p) < deg_u(Zd) - deg_u(q), an integer comparison. The
 * serial routine is the reference; the OpenMP kernel must produce the
 * identical hit list (see tests/ and bench/).
 */

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pcf/fields.hpp"
#include "pcf/parallel.hpp"
#include "pcf/puiseux.hpp"

namespace pcf::scan {

using Dense = std::vector<unsigned long>;  // ascending u-coefficients, trimmed

struct Task {
    GF fld;
    unsigned long ram;  // u = t^(1/ram)
    Dense z_num, z_den;
    long dp_max;  // u-degree bound for p (p = 0 included)
    long dq_max;  // u-degree bound for q; q monic
};

struct Hit {
    unsigned long long q_index;
    unsigned long long p_index;
    Dense p, q;

    friend bool operator==(const Hit& a, const Hit& b) {
        return a.q_index == b.q_index && a.p_index == b.p_index && a.p == b.p && a.q == b.q;
    }
};

struct Result {
    std::vector<Hit> hits;  // sorted by (q_index, p_index)
    unsigned long long pairs_tested = 0;

    friend bool operator==(const Result& a, const Result& b) {
        return a.pairs_tested == b.pairs_tested && a.hits == b.hits;
    }
};

namespace detail {

inline unsigned long long pow_ull(unsigned long b, long e) {
    unsigned long long r = 1;
    for (long i = 0; i < e; ++i) r *= b;
    return r;
}

/// Number of p-candidates: all dense polys of u-degree <= dp_max.
inline unsigned long long p_count(const Task& t) {
    return pow_ull(t.fld.modulus(), t.dp_max + 1);
}

/// Number of monic q-candidates across u-degrees 0..dq_max.
inline unsigned long long q_count(const Task& t) {
    unsigned long long n = 0;
    for (long d = 0; d <= t.dq_max; ++d) n += pow_ull(t.fld.modulus(), d);
    return n;
}

inline Dense decode_p(const Task& t, unsigned long long idx) {
    Dense out;
    unsigned long p = t.fld.modulus();
    for (long i = 0; i <= t.dp_max; ++i) {
        out.push_back(static_cast<unsigned long>(idx % p));
        idx /= p;
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

inline Dense decode_q(const Task& t, unsigned long long idx) {
    unsigned long p = t.fld.modulus();
    long d = 0;
    while (idx >= pow_ull(p, d)) {
        idx -= pow_ull(p, d);
        ++d;
    }
    Dense out;
    for (long i = 0; i < d; ++i) {
        out.push_back(static_cast<unsigned long>(idx % p));
        idx /= p;
    }
    out.push_back(1);  // monic
    return out;
}

inline Dense dense_mul(const GF& fld, const Dense& a, const Dense& b) {
    if (a.empty() || b.empty()) return {};
    Dense out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = fld.add(out[i + j], fld.mul(a[i], b[j]));
    }
    return out;
}

/// deg(A - B) < bound, i.e. the arrays agree at every index >= bound
/// (and everywhere when bound <= 0, making the degree -inf).
inline bool difference_below(const Dense& a, const Dense& b, long bound) {
    long top = static_cast<long>(std::max(a.size(), b.size())) - 1;
    for (long i = top; i >= std::max(bound, 0l); --i) {
        unsigned long ca = i < static_cast<long>(a.size()) ? a[i] : 0;
        unsigned long cb = i < static_cast<long>(b.size()) ? b[i] : 0;
        if (ca != cb) return false;
    }
    return true;
}

inline bool comaximal(const GF& fld, Dense a, Dense b) {
    while (!b.empty()) {
        // a mod b
        auto inv = fld.inv(b.back());
        while (a.size() >= b.size()) {
            auto c = fld.mul(a.back(), inv);
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[shift + i] = fld.sub(a[shift + i], fld.mul(c, b[i]));
            while (!a.empty() && a.back() == 0) a.pop_back();
        }
        std::swap(a, b);
    }
    return a.size() == 1;  // gcd is a nonzero constant
}

/// Work shared by both drivers: all p against one q.
inline void scan_one_q(const Task& t, unsigned long long qi,
                       const std::vector<Dense>& zden_p_table, std::vector<Hit>& hits) {
    Dense q = decode_q(t, qi);
    Dense znq = dense_mul(t.fld, t.z_num, q);
    long bound = (static_cast<long>(t.z_den.size()) - 1) - (static_cast<long>(q.size()) - 1);
    unsigned long long np = zden_p_table.size();
    for (unsigned long long pi = 0; pi < np; ++pi) {
        if (!difference_below(znq, zden_p_table[pi], bound)) continue;
        Dense p = decode_p(t, pi);
        if (!comaximal(t.fld, p, q)) continue;
        hits.push_back({qi, pi, std::move(p), q});
    }
}

inline std::vector<Dense> build_p_table(const Task& t) {
    unsigned long long np = p_count(t);
    std::vector<Dense> table(np);
    for (unsigned long long pi = 0; pi < np; ++pi)
        table[pi] = dense_mul(t.fld, t.z_den, decode_p(t, pi));
    return table;
}

}  // namespace detail

/// Reference implementation: one flat loop, kept deliberately simple.
inline Result scan_serial(const Task& t) {
    Result out;
    auto table = detail::build_p_table(t);
    unsigned long long nq = detail::q_count(t);
    for (unsigned long long qi = 0; qi < nq; ++qi)
        detail::scan_one_q(t, qi, table, out.hits);
    out.pairs_tested = nq * detail::p_count(t);
    return out;
}

/// OpenMP kernel: q-major partition with thread-local hit lists, merged
/// and sorted back to the serial order.
inline Result scan_parallel(const Task& t) {
    Result out;
    auto table = detail::build_p_table(t);
    unsigned long long nq = detail::q_count(t);
    int threads = par::max_threads();
    std::vector<std::vector<Hit>> local(static_cast<std::size_t>(threads));
#ifdef _OPENMP
#pragma omp parallel num_threads(threads)
    {
        int tid = omp_get_thread_num();
#pragma omp for schedule(dynamic)
        for (long long qi = 0; qi < static_cast<long long>(nq); ++qi)
            detail::scan_one_q(t, static_cast<unsigned long long>(qi), table,
                               local[static_cast<std::size_t>(tid)]);
    }
#else
    for (unsigned long long qi = 0; qi < nq; ++qi)
        detail::scan_one_q(t, qi, table, local[0]);
#endif
    for (auto& l : local)
        out.hits.insert(out.hits.end(), std::make_move_iterator(l.begin()),
                        std::make_move_iterator(l.end()));
    std::sort(out.hits.begin(), out.hits.end(), [](const Hit& a, const Hit& b) {
        return a.q_index != b.q_index ? a.q_index < b.q_index : a.p_index < b.p_index;
    });
    out.pairs_tested = nq * detail::p_count(t);
    return out;
}

/// Builds a task from library values; z = num/den need not be reduced.
inline Task make_task(const GF& fld, const PuiseuxPoly<GF>& z_num,
                      const PuiseuxPoly<GF>& z_den, unsigned long ram, long dp_max,
                      long dq_max) {
    Task t{fld, ram, {}, {}, dp_max, dq_max};
    t.z_num = z_num.to_dense(ram);
    t.z_den = z_den.to_dense(ram);
    while (!t.z_num.empty() && t.z_num.back() == 0) t.z_num.pop_back();
    while (!t.z_den.empty() && t.z_den.back() == 0) t.z_den.pop_back();
    if (t.z_den.empty()) throw DivisionByZero();
    return t;
}

template <typename D>
PuiseuxPoly<GF> to_poly(const GF& fld, const D& dense, unsigned long ram) {
    return PuiseuxPoly<GF>::from_dense(fld, dense, ram);
}

}  // namespace pcf::scan
