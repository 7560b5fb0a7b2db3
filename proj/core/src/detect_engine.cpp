#include "detect_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ghd/detail/kahan.hpp"
#include "ghd/parallel.hpp"

namespace ghd::detail {

DetectEngine::DetectEngine(const LabeledGraph& a, const LabeledGraph& b, WeightScheme scheme)
    : scheme_(scheme), n0_(a.size()), ext_(a.size()), k_(a.size()) {
    if (!a.same_labels(b))
        throw std::invalid_argument("detect: graphs must share one labelled node set");
    alive_.assign(static_cast<std::size_t>(ext_), 1);
    orig_.resize(static_cast<std::size_t>(ext_));
    slot_of_.resize(static_cast<std::size_t>(ext_));
    for (int i = 0; i < ext_; ++i) {
        orig_[static_cast<std::size_t>(i)] = i;
        slot_of_[static_cast<std::size_t>(i)] = i;
    }
    recip_.resize(static_cast<std::size_t>(n0_) + 2);
    recip_[0] = 0.0;
    for (std::size_t t = 1; t < recip_.size(); ++t) recip_[t] = 1.0 / static_cast<double>(t);
    build_side(a, a_);
    build_side(b, b_);
}

void DetectEngine::build_side(const LabeledGraph& g, Side& s) const {
    const int n = ext_;
    const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    s.adj.assign(nn, 0);
    s.deg = g.degrees();
    s.w.assign(nn, 0.0);
    const bool to = scheme_ == WeightScheme::topological_overlap;
    if (to) s.ncn.assign(nn, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool e = g.has_edge(i, j);
            if (e) {
                s.adj[at(i, j)] = 1;
                s.adj[at(j, i)] = 1;
            }
            if (to) {
                int num = g.common_neighbors(i, j) + (e ? 1 : 0);
                s.ncn[at(i, j)] = static_cast<std::uint16_t>(num);
                s.ncn[at(j, i)] = static_cast<std::uint16_t>(num);
            }
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            std::size_t o = at(i, j);
            if (to) {
                int idx = std::min(s.deg[static_cast<std::size_t>(i)],
                                   s.deg[static_cast<std::size_t>(j)]) +
                          1 - s.adj[o];
                s.w[o] = s.ncn[o] * recip_[static_cast<std::size_t>(idx)];
            } else {
                s.w[o] = s.adj[o];
            }
        }
    s.row.assign(static_cast<std::size_t>(n), 0.0);
    s.rsq.assign(static_cast<std::size_t>(n), 0.0);
    s.g1.assign(static_cast<std::size_t>(n), 0.0);
    s.gx.assign(static_cast<std::size_t>(n), 0.0);
}

std::vector<int> DetectEngine::live_ids() const {
    std::vector<int> ids;
    ids.reserve(static_cast<std::size_t>(k_));
    for (int p = 0; p < ext_; ++p)
        if (alive_[static_cast<std::size_t>(p)]) ids.push_back(orig_[static_cast<std::size_t>(p)]);
    return ids;
}

void DetectEngine::refresh() {
    const bool to = scheme_ == WeightScheme::topological_overlap;
    rx_.assign(static_cast<std::size_t>(ext_), 0.0);
    gxx_.assign(static_cast<std::size_t>(ext_), 0.0);

    for (int p = 0; p < ext_; ++p) {
        const std::size_t sp = static_cast<std::size_t>(p);
        a_.row[sp] = a_.rsq[sp] = a_.g1[sp] = a_.gx[sp] = 0.0;
        b_.row[sp] = b_.rsq[sp] = b_.g1[sp] = b_.gx[sp] = 0.0;
        if (!alive_[sp]) continue;
        const std::size_t off = static_cast<std::size_t>(p) * static_cast<std::size_t>(ext_);
        double ra = 0.0, r2a = 0.0, rb = 0.0, r2b = 0.0, rxp = 0.0;
        if (to) {
            double g1a = 0.0, gxa = 0.0, g1b = 0.0, gxb = 0.0, gxx = 0.0;
            const int dpa = a_.deg[sp], dpb = b_.deg[sp];
            for (int q = 0; q < ext_; ++q) {
                const std::size_t o = off + static_cast<std::size_t>(q);
                const double wa = a_.w[o], wb = b_.w[o];
                ra += wa;
                r2a += wa * wa;
                rb += wb;
                r2b += wb * wb;
                rxp += wa * wb;
                const std::size_t sq = static_cast<std::size_t>(q);
                int ia = std::min(dpa - 1, a_.deg[sq]) + 1 - a_.adj[o];
                int ib = std::min(dpb - 1, b_.deg[sq]) + 1 - b_.adj[o];
                double d1a = a_.ncn[o] * recip_[static_cast<std::size_t>(ia)] - wa;
                double d1b = b_.ncn[o] * recip_[static_cast<std::size_t>(ib)] - wb;
                g1a += d1a;
                gxa += d1a * wb;
                g1b += d1b;
                gxb += d1b * wa;
                gxx += d1a * d1b;
            }
            a_.g1[sp] = g1a;
            a_.gx[sp] = gxa;
            b_.g1[sp] = g1b;
            b_.gx[sp] = gxb;
            gxx_[sp] = gxx;
        } else {
            for (int q = 0; q < ext_; ++q) {
                const std::size_t o = off + static_cast<std::size_t>(q);
                const double wa = a_.w[o], wb = b_.w[o];
                ra += wa;
                r2a += wa * wa;
                rb += wb;
                r2b += wb * wb;
                rxp += wa * wb;
            }
        }
        a_.row[sp] = ra;
        a_.rsq[sp] = r2a;
        b_.row[sp] = rb;
        b_.rsq[sp] = r2b;
        rx_[sp] = rxp;
    }

    Kahan s1a, s2a, ta, s1b, s2b, tb, xk;
    for (int p = 0; p < ext_; ++p) {
        const std::size_t sp = static_cast<std::size_t>(p);
        if (!alive_[sp]) continue;
        s1a.add(a_.row[sp]);
        s2a.add(a_.rsq[sp]);
        ta.add(a_.row[sp] * a_.row[sp]);
        s1b.add(b_.row[sp]);
        s2b.add(b_.rsq[sp]);
        tb.add(b_.row[sp] * b_.row[sp]);
        xk.add(rx_[sp]);
    }
    a_.s1 = s1a.value();
    a_.s2 = s2a.value();
    a_.t = ta.value();
    b_.s1 = s1b.value();
    b_.s2 = s2b.value();
    b_.t = tb.value();
    x_ = xk.value();
    fresh_ = true;
}

StepStats DetectEngine::stats() const {
    if (!fresh_) throw std::logic_error("DetectEngine::stats: call refresh() first");
    StepStats st;
    st.k = k_;
    const double kk = static_cast<double>(k_);
    const double m = kk * (kk - 1.0);

    MomentTerms ta, tb;
    ta.s1 = a_.s1;
    ta.s2 = a_.s2;
    ta.t = a_.t;
    ta.a = ta.s1 * ta.s1;
    ta.b = ta.t - ta.s2;
    ta.c = ta.a + 2.0 * ta.s2 - 4.0 * ta.t;
    tb.s1 = b_.s1;
    tb.s2 = b_.s2;
    tb.t = b_.t;
    tb.a = tb.s1 * tb.s1;
    tb.b = tb.t - tb.s2;
    tb.c = tb.a + 2.0 * tb.s2 - 4.0 * tb.t;
    PermutationMoments pm = moments_from_terms(k_, ta, tb);

    const double raw = (a_.s2 + b_.s2 - 2.0 * x_) / m;
    const double shift_root = a_.s1 / m - b_.s1 / m;
    const double shift = shift_root * shift_root;
    st.statistic = raw - shift;
    st.mu = pm.mu - shift;
    st.sigma2 = pm.sigma2;
    if (pm.sigma2 > 0.0) {
        st.z = (st.statistic - st.mu) / std::sqrt(pm.sigma2);
        st.p_association = normal_cdf(st.z);
        st.degenerate = false;
    } else {
        st.z = std::nan("");
        st.p_association = std::nan("");
        st.degenerate = true;
    }
    return st;
}

double DetectEngine::delta_for(int slot, Scratch& sc) const {
    const double kk = static_cast<double>(k_);
    const double m = kk * (kk - 1.0);
    const double m2 = (kk - 1.0) * (kk - 2.0);
    const double delta0 = 2.0 * (a_.s1 * b_.s1 / m - x_) / m;
    const std::size_t si = static_cast<std::size_t>(slot);

    double p1a = 0.0, p1b = 0.0, px = 0.0;
    if (scheme_ == WeightScheme::topological_overlap) {
        sc.na.clear();
        sc.nb.clear();
        sc.un.clear();
        const std::size_t off = static_cast<std::size_t>(slot) * static_cast<std::size_t>(ext_);
        for (int q = 0; q < ext_; ++q) {
            if (a_.adj[off + static_cast<std::size_t>(q)]) {
                sc.na.push_back(q);
                sc.in_a[static_cast<std::size_t>(q)] = 1;
            }
            if (b_.adj[off + static_cast<std::size_t>(q)]) {
                sc.nb.push_back(q);
                sc.in_b[static_cast<std::size_t>(q)] = 1;
            }
        }
        for (int q : sc.na) sc.un.push_back(q);
        for (int q : sc.nb)
            if (!sc.in_a[static_cast<std::size_t>(q)]) sc.un.push_back(q);

        for (int p : sc.na) {
            p1a += a_.g1[static_cast<std::size_t>(p)] - d1(a_, p, slot);
            px += a_.gx[static_cast<std::size_t>(p)] - d1(a_, p, slot) * b_.w[at(p, slot)];
            if (sc.in_b[static_cast<std::size_t>(p)])
                px += gxx_[static_cast<std::size_t>(p)] - d1(a_, p, slot) * d1(b_, p, slot);
        }
        for (int p : sc.nb) {
            p1b += b_.g1[static_cast<std::size_t>(p)] - d1(b_, p, slot);
            px += b_.gx[static_cast<std::size_t>(p)] - d1(b_, p, slot) * a_.w[at(p, slot)];
        }
        for (std::size_t x = 0; x < sc.na.size(); ++x)
            for (std::size_t y = x + 1; y < sc.na.size(); ++y) {
                int p = sc.na[x], q = sc.na[y];
                p1a += d2(a_, p, q) - d1(a_, p, q) - d1(a_, q, p);
            }
        for (std::size_t x = 0; x < sc.nb.size(); ++x)
            for (std::size_t y = x + 1; y < sc.nb.size(); ++y) {
                int p = sc.nb[x], q = sc.nb[y];
                p1b += d2(b_, p, q) - d1(b_, p, q) - d1(b_, q, p);
            }
        // Pairs with both endpoints near the removed node: replace the
        // row-sum approximation of the cross-product change with its exact
        // value.
        for (std::size_t x = 0; x < sc.un.size(); ++x)
            for (std::size_t y = x + 1; y < sc.un.size(); ++y) {
                const int p = sc.un[x], q = sc.un[y];
                const std::size_t spq = static_cast<std::size_t>(p);
                const std::size_t sqq = static_cast<std::size_t>(q);
                const bool ap = sc.in_a[spq], aq = sc.in_a[sqq];
                const bool bp = sc.in_b[spq], bq = sc.in_b[sqq];
                const double wa = a_.w[at(p, q)], wb = b_.w[at(p, q)];
                const double da = (ap && aq) ? d2(a_, p, q)
                                 : ap        ? d1(a_, p, q)
                                 : aq        ? d1(a_, q, p)
                                             : 0.0;
                const double db = (bp && bq) ? d2(b_, p, q)
                                 : bp        ? d1(b_, p, q)
                                 : bq        ? d1(b_, q, p)
                                             : 0.0;
                double exact = da * wb + wa * db + da * db;
                double base = 0.0;
                if (ap) base += d1(a_, p, q) * wb;
                if (aq) base += d1(a_, q, p) * wb;
                if (bp) base += d1(b_, p, q) * wa;
                if (bq) base += d1(b_, q, p) * wa;
                if (ap && bp) base += d1(a_, p, q) * d1(b_, p, q);
                if (aq && bq) base += d1(a_, q, p) * d1(b_, q, p);
                px += exact - base;
            }
        for (int q : sc.na) sc.in_a[static_cast<std::size_t>(q)] = 0;
        for (int q : sc.nb) sc.in_b[static_cast<std::size_t>(q)] = 0;
    }

    const double s1a = a_.s1 - 2.0 * a_.row[si] + 2.0 * p1a;
    const double s1b = b_.s1 - 2.0 * b_.row[si] + 2.0 * p1b;
    const double x = x_ - 2.0 * rx_[si] + 2.0 * px;
    return 2.0 * (s1a * s1b / m2 - x) / m2 - delta0;
}

std::vector<double> DetectEngine::deltas(int n_workers) {
    if (!fresh_) throw std::logic_error("DetectEngine::deltas: call refresh() first");
    if (k_ < 5)
        throw std::logic_error("DetectEngine::deltas: need at least 5 live nodes");
    std::vector<int> slots;
    slots.reserve(static_cast<std::size_t>(k_));
    for (int p = 0; p < ext_; ++p)
        if (alive_[static_cast<std::size_t>(p)]) slots.push_back(p);

    const int workers = resolve_worker_slots(static_cast<std::int64_t>(slots.size()), n_workers);
    if (static_cast<int>(scratch_.size()) < workers) scratch_.resize(static_cast<std::size_t>(workers));
    for (auto& sc : scratch_) {
        if (static_cast<int>(sc.in_a.size()) < ext_) {
            sc.in_a.assign(static_cast<std::size_t>(ext_), 0);
            sc.in_b.assign(static_cast<std::size_t>(ext_), 0);
        }
    }

    std::vector<double> out(slots.size(), 0.0);
    parallel_for_workers(static_cast<std::int64_t>(slots.size()), workers,
                         [&](int w, std::int64_t i) {
                             out[static_cast<std::size_t>(i)] =
                                 delta_for(slots[static_cast<std::size_t>(i)],
                                           scratch_[static_cast<std::size_t>(w)]);
                         });
    return out;
}

void DetectEngine::remove_side(Side& s, int slot) {
    const bool to = scheme_ == WeightScheme::topological_overlap;
    const std::size_t off = static_cast<std::size_t>(slot) * static_cast<std::size_t>(ext_);
    std::vector<int> nbr;
    for (int q = 0; q < ext_; ++q)
        if (s.adj[off + static_cast<std::size_t>(q)]) nbr.push_back(q);

    if (to) {
        for (std::size_t x = 0; x < nbr.size(); ++x)
            for (std::size_t y = x + 1; y < nbr.size(); ++y) {
                --s.ncn[at(nbr[x], nbr[y])];
                --s.ncn[at(nbr[y], nbr[x])];
            }
    }
    for (int p : nbr) --s.deg[static_cast<std::size_t>(p)];
    s.deg[static_cast<std::size_t>(slot)] = 0;
    for (int q = 0; q < ext_; ++q) {
        s.adj[off + static_cast<std::size_t>(q)] = 0;
        s.adj[at(q, slot)] = 0;
        s.w[off + static_cast<std::size_t>(q)] = 0.0;
        s.w[at(q, slot)] = 0.0;
        if (to) {
            s.ncn[off + static_cast<std::size_t>(q)] = 0;
            s.ncn[at(q, slot)] = 0;
        }
    }
    if (to) {
        // Every surviving pair touching the old neighbourhood changed weight.
        for (int p : nbr) {
            const std::size_t poff = static_cast<std::size_t>(p) * static_cast<std::size_t>(ext_);
            const int dp = s.deg[static_cast<std::size_t>(p)];
            for (int q = 0; q < ext_; ++q) {
                if (q == p) continue;
                const std::size_t o = poff + static_cast<std::size_t>(q);
                int idx = std::min(dp, s.deg[static_cast<std::size_t>(q)]) + 1 - s.adj[o];
                double w = s.ncn[o] * recip_[static_cast<std::size_t>(idx)];
                s.w[o] = w;
                s.w[at(q, p)] = w;
            }
        }
    }
}

void DetectEngine::remove_one(int slot) {
    remove_side(a_, slot);
    remove_side(b_, slot);
    alive_[static_cast<std::size_t>(slot)] = 0;
    slot_of_[static_cast<std::size_t>(orig_[static_cast<std::size_t>(slot)])] = -1;
    --k_;
}

void DetectEngine::remove(const std::vector<int>& original_ids) {
    for (int id : original_ids) {
        if (id < 0 || id >= n0_ || slot_of_[static_cast<std::size_t>(id)] < 0)
            throw std::invalid_argument("DetectEngine::remove: node not alive");
        remove_one(slot_of_[static_cast<std::size_t>(id)]);
    }
    fresh_ = false;
    if (k_ >= 4 && 10LL * k_ < 7LL * ext_) compact();
}

void DetectEngine::compact() {
    std::vector<int> old_slots;
    old_slots.reserve(static_cast<std::size_t>(k_));
    for (int p = 0; p < ext_; ++p)
        if (alive_[static_cast<std::size_t>(p)]) old_slots.push_back(p);
    const int ne = static_cast<int>(old_slots.size());
    const bool to = scheme_ == WeightScheme::topological_overlap;

    auto shrink_side = [&](Side& s) {
        for (int np = 0; np < ne; ++np) {
            const std::size_t op = static_cast<std::size_t>(old_slots[static_cast<std::size_t>(np)]);
            const std::size_t orow = op * static_cast<std::size_t>(ext_);
            const std::size_t nrow = static_cast<std::size_t>(np) * static_cast<std::size_t>(ne);
            for (int nq = 0; nq < ne; ++nq) {
                const std::size_t oq =
                    static_cast<std::size_t>(old_slots[static_cast<std::size_t>(nq)]);
                s.adj[nrow + static_cast<std::size_t>(nq)] = s.adj[orow + oq];
                s.w[nrow + static_cast<std::size_t>(nq)] = s.w[orow + oq];
                if (to) s.ncn[nrow + static_cast<std::size_t>(nq)] = s.ncn[orow + oq];
            }
            s.deg[static_cast<std::size_t>(np)] = s.deg[op];
        }
        const std::size_t nn = static_cast<std::size_t>(ne) * static_cast<std::size_t>(ne);
        s.adj.resize(nn);
        s.w.resize(nn);
        if (to) s.ncn.resize(nn);
        s.deg.resize(static_cast<std::size_t>(ne));
        s.row.resize(static_cast<std::size_t>(ne));
        s.rsq.resize(static_cast<std::size_t>(ne));
        s.g1.resize(static_cast<std::size_t>(ne));
        s.gx.resize(static_cast<std::size_t>(ne));
    };
    shrink_side(a_);
    shrink_side(b_);

    for (int np = 0; np < ne; ++np)
        orig_[static_cast<std::size_t>(np)] =
            orig_[static_cast<std::size_t>(old_slots[static_cast<std::size_t>(np)])];
    orig_.resize(static_cast<std::size_t>(ne));
    alive_.assign(static_cast<std::size_t>(ne), 1);
    std::fill(slot_of_.begin(), slot_of_.end(), -1);
    for (int np = 0; np < ne; ++np)
        slot_of_[static_cast<std::size_t>(orig_[static_cast<std::size_t>(np)])] = np;
    ext_ = ne;
    for (auto& sc : scratch_) {
        sc.in_a.assign(static_cast<std::size_t>(ext_), 0);
        sc.in_b.assign(static_cast<std::size_t>(ext_), 0);
    }
}

} // namespace ghd::detail
