// Copyright 2026 The PFSR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pfsr/blossom.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "pfsr/errors.hpp"

namespace pfsr {

namespace {

// Vertices are 0..n-1, blossoms n..2n-1. Edge k has endpoints 2k (its u) and 2k+1 (its v); a vertex
// lists the remote endpoint of each incident edge.
class Blossom {
   public:
    Blossom(std::size_t n, const std::vector<WeightedEdge> &edges, bool max_cardinality)
        : n_(static_cast<long>(n)), edges_(edges), max_card_(max_cardinality) {
        const long m = static_cast<long>(edges.size());
        std::int64_t max_weight = 0;
        neighbend_.resize(n);
        for (long k = 0; k < m; k++) {
            const auto &e = edges[k];
            if (e.u >= n || e.v >= n || e.u == e.v) {
                throw PreconditionError("bad matching edge");
            }
            // Doubled weights keep every dual update integral.
            edges_[k].weight = 2 * e.weight;
            max_weight = std::max(max_weight, edges_[k].weight);
            endpoint_.push_back(static_cast<long>(e.u));
            endpoint_.push_back(static_cast<long>(e.v));
            neighbend_[e.u].push_back(2 * k + 1);
            neighbend_[e.v].push_back(2 * k);
        }
        const long nn = 2 * n_;
        mate_.assign(n, -1);
        label_.assign(nn, 0);
        labelend_.assign(nn, -1);
        inblossom_.resize(n);
        blossombase_.assign(nn, -1);
        for (long v = 0; v < n_; v++) {
            inblossom_[v] = v;
            blossombase_[v] = v;
        }
        blossomparent_.assign(nn, -1);
        blossomchilds_.assign(nn, {});
        blossomendps_.assign(nn, {});
        bestedge_.assign(nn, -1);
        blossombestedges_.assign(nn, std::nullopt);
        for (long b = n_; b < nn; b++) {
            unused_.push_back(b);
        }
        dualvar_.assign(nn, 0);
        for (long v = 0; v < n_; v++) {
            dualvar_[v] = max_weight;
        }
        allowedge_.assign(m, false);
    }

    std::vector<long> solve();

   private:
    std::int64_t slack(long k) const { return dualvar_[edges_[k].u] + dualvar_[edges_[k].v] - 2 * edges_[k].weight; }
    long edge_u(long k) const { return static_cast<long>(edges_[k].u); }
    long edge_v(long k) const { return static_cast<long>(edges_[k].v); }

    void leaves(long b, std::vector<long> &out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (auto t : blossomchilds_[b]) {
            leaves(t, out);
        }
    }
    std::vector<long> leaves(long b) const {
        std::vector<long> out;
        leaves(b, out);
        return out;
    }
    // Cyclic indexing into a blossom's child list; walks around the cycle use negative offsets.
    static long wrap(long j, std::size_t len) {
        const long l = static_cast<long>(len);
        return ((j % l) + l) % l;
    }

    void assign_label(long w, int t, long p);
    long scan_blossom(long v, long w);
    void add_blossom(long base, long k);
    void expand_blossom(long b, bool endstage);
    void augment_blossom(long b, long v);
    void augment_matching(long k);

    long n_;
    std::vector<WeightedEdge> edges_;
    bool max_card_;
    std::vector<long> endpoint_;
    std::vector<std::vector<long>> neighbend_;
    std::vector<long> mate_;
    // 0 free, 1 outer (S), 2 inner (T); 5 marks a breadcrumb during scan_blossom.
    std::vector<int> label_;
    std::vector<long> labelend_;
    std::vector<long> inblossom_;
    std::vector<long> blossomparent_;
    std::vector<std::vector<long>> blossomchilds_;
    std::vector<long> blossombase_;
    std::vector<std::vector<long>> blossomendps_;
    std::vector<long> bestedge_;
    std::vector<std::optional<std::vector<long>>> blossombestedges_;
    std::vector<long> unused_;
    std::vector<std::int64_t> dualvar_;
    std::vector<bool> allowedge_;
    std::vector<long> queue_;
};

void Blossom::assign_label(long w, int t, long p) {
    const long b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        leaves(b, queue_);
    } else if (t == 2) {
        const long base = blossombase_[b];
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

// Walks up from v and w in alternation; returns the base of the new blossom, or -1 when the two
// trees differ (an augmenting path exists).
long Blossom::scan_blossom(long v, long w) {
    std::vector<long> path;
    long base = -1;
    while (v != -1 || w != -1) {
        long b = inblossom_[v];
        if (label_[b] & 4) {
            base = blossombase_[b];
            break;
        }
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) {
            std::swap(v, w);
        }
    }
    for (auto b : path) {
        label_[b] = 1;
    }
    return base;
}

void Blossom::add_blossom(long base, long k) {
    long v = edge_u(k), w = edge_v(k);
    const long bb = inblossom_[base];
    long bv = inblossom_[v], bw = inblossom_[w];
    const long b = unused_.back();
    unused_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    std::vector<long> path, endps;
    while (bv != bb) {
        blossomparent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        blossomparent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    blossomchilds_[b] = path;
    blossomendps_[b] = endps;
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    for (auto leaf : leaves(b)) {
        if (label_[inblossom_[leaf]] == 2) {
            queue_.push_back(leaf);
        }
        inblossom_[leaf] = b;
    }
    std::vector<long> bestedgeto(2 * n_, -1);
    for (auto child : path) {
        std::vector<std::vector<long>> nblists;
        if (!blossombestedges_[child]) {
            for (auto leaf : leaves(child)) {
                std::vector<long> ks;
                for (auto p : neighbend_[leaf]) {
                    ks.push_back(p / 2);
                }
                nblists.push_back(std::move(ks));
            }
        } else {
            nblists.push_back(*blossombestedges_[child]);
        }
        for (const auto &list : nblists) {
            for (auto kk : list) {
                long i = edge_u(kk), j = edge_v(kk);
                if (inblossom_[j] == b) {
                    std::swap(i, j);
                }
                const long bj = inblossom_[j];
                if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                    bestedgeto[bj] = kk;
                }
            }
        }
        blossombestedges_[child].reset();
        bestedge_[child] = -1;
    }
    std::vector<long> best;
    for (auto kk : bestedgeto) {
        if (kk != -1) {
            best.push_back(kk);
        }
    }
    bestedge_[b] = -1;
    for (auto kk : best) {
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
            bestedge_[b] = kk;
        }
    }
    blossombestedges_[b] = std::move(best);
}

void Blossom::expand_blossom(long b, bool endstage) {
    const auto childs = blossomchilds_[b];
    for (auto s : childs) {
        blossomparent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dualvar_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            for (auto leaf : leaves(s)) {
                inblossom_[leaf] = s;
            }
        }
    }
    if (!endstage && label_[b] == 2) {
        // Relabel the children along the even-length side of the cycle from the entry child to the base.
        const auto &ch = blossomchilds_[b];
        const auto &ep = blossomendps_[b];
        const std::size_t len = ch.size();
        const long entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        long j = static_cast<long>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
        long jstep, endptrick;
        if (j & 1) {
            j -= static_cast<long>(len);
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        long p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[ep[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[ep[wrap(j - endptrick, len)] / 2] = true;
            j += jstep;
            p = ep[wrap(j - endptrick, len)] ^ endptrick;
            allowedge_[p / 2] = true;
            j += jstep;
        }
        long bv = ch[wrap(j, len)];
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (ch[wrap(j, len)] != entrychild) {
            bv = ch[wrap(j, len)];
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            long found = -1;
            for (auto leaf : leaves(bv)) {
                if (label_[leaf] != 0) {
                    found = leaf;
                    break;
                }
            }
            if (found != -1) {
                label_[found] = 0;
                label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                assign_label(found, 2, labelend_[found]);
            }
            j += jstep;
        }
    }
    label_[b] = -1;
    labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].reset();
    bestedge_[b] = -1;
    unused_.push_back(b);
}

void Blossom::augment_blossom(long b, long v) {
    long t = v;
    while (blossomparent_[t] != b) {
        t = blossomparent_[t];
    }
    if (t >= n_) {
        augment_blossom(t, v);
    }
    auto &ch = blossomchilds_[b];
    auto &ep = blossomendps_[b];
    const std::size_t len = ch.size();
    const long i = static_cast<long>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    long j = i, jstep, endptrick;
    if (i & 1) {
        j -= static_cast<long>(len);
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = ch[wrap(j, len)];
        const long p = ep[wrap(j - endptrick, len)] ^ endptrick;
        if (t >= n_) {
            augment_blossom(t, endpoint_[p]);
        }
        j += jstep;
        t = ch[wrap(j, len)];
        if (t >= n_) {
            augment_blossom(t, endpoint_[p ^ 1]);
        }
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    blossombase_[b] = blossombase_[ch[0]];
}

void Blossom::augment_matching(long k) {
    const long v = edge_u(k), w = edge_v(k);
    for (auto [s, p] : {std::pair<long, long>{v, 2 * k + 1}, std::pair<long, long>{w, 2 * k}}) {
        while (true) {
            const long bs = inblossom_[s];
            if (bs >= n_) {
                augment_blossom(bs, s);
            }
            mate_[s] = p;
            if (labelend_[bs] == -1) {
                break;
            }
            const long t = endpoint_[labelend_[bs]];
            const long bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            const long j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= n_) {
                augment_blossom(bt, j);
            }
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<long> Blossom::solve() {
    const long nn = 2 * n_;
    for (long stage = 0; stage < n_; stage++) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (long b = n_; b < nn; b++) {
            blossombestedges_[b].reset();
        }
        std::fill(allowedge_.begin(), allowedge_.end(), false);
        queue_.clear();
        for (long v = 0; v < n_; v++) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }
        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                const long v = queue_.back();
                queue_.pop_back();
                for (auto p : neighbend_[v]) {
                    const long k = p / 2;
                    const long w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) {
                        continue;
                    }
                    std::int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) {
                            allowedge_[k] = true;
                        }
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            const long base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        const long b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                            bestedge_[b] = k;
                        }
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                            bestedge_[w] = k;
                        }
                    }
                }
            }
            if (augmented) {
                break;
            }
            // No augmenting path with the current duals: pick the smallest dual adjustment.
            int deltatype = -1;
            std::int64_t delta = 0;
            long deltaedge = -1, deltablossom = -1;
            if (!max_card_) {
                deltatype = 1;
                delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
            }
            for (long v = 0; v < n_; v++) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    const auto d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (long b = 0; b < nn; b++) {
                if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    const auto d = slack(bestedge_[b]) / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (long b = n_; b < nn; b++) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dualvar_[b] < delta)) {
                    delta = dualvar_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<std::int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n_));
            }
            for (long v = 0; v < n_; v++) {
                if (label_[inblossom_[v]] == 1) {
                    dualvar_[v] -= delta;
                } else if (label_[inblossom_[v]] == 2) {
                    dualvar_[v] += delta;
                }
            }
            for (long b = n_; b < nn; b++) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                    if (label_[b] == 1) {
                        dualvar_[b] += delta;
                    } else if (label_[b] == 2) {
                        dualvar_[b] -= delta;
                    }
                }
            }
            if (deltatype == 1) {
                break;
            }
            if (deltatype == 2) {
                allowedge_[deltaedge] = true;
                long i = edge_u(deltaedge), j = edge_v(deltaedge);
                if (label_[inblossom_[i]] == 0) {
                    std::swap(i, j);
                }
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = true;
                queue_.push_back(edge_u(deltaedge));
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) {
            break;
        }
        for (long b = n_; b < nn; b++) {
            if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }
    std::vector<long> partner(n_, -1);
    for (long v = 0; v < n_; v++) {
        if (mate_[v] >= 0) {
            partner[v] = endpoint_[mate_[v]];
        }
    }
    return partner;
}

}  // namespace

std::vector<long> max_weight_matching(std::size_t num_vertices, const std::vector<WeightedEdge> &edges, bool max_cardinality) {
    if (num_vertices == 0) {
        return {};
    }
    return Blossom(num_vertices, edges, max_cardinality).solve();
}

}  // namespace pfsr
