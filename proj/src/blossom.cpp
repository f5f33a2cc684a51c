#include "dimerlab/blossom.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <string>

#include "dimerlab/errors.hpp"

namespace dimerlab {
namespace {

// Port of the classic multi-tree weighted-matching formulation (Galil's
// survey; the arrangement with endpoint indices follows van Rantwijk's
// reference implementation). Vertices 0..n-1 are trivial blossoms; ids
// n..2n-1 are allocated to nontrivial blossoms. Endpoint p in 0..2E-1 names
// edge p/2 seen from one side; p^1 is the other side.
class BlossomSolver {
 public:
  BlossomSolver(int n,
                std::span<const std::pair<std::int32_t, std::int32_t>> ends,
                std::span<const std::int64_t> weights, bool max_cardinality,
                bool greedy_init = false)
      : n_(n),
        m_(static_cast<int>(ends.size())),
        maxcard_(max_cardinality),
        greedy_init_(greedy_init) {
    ends_.assign(ends.begin(), ends.end());
    tw_.resize(m_);
    max_weight_ = 0;
    for (int k = 0; k < m_; ++k) {
      auto [i, j] = ends_[k];
      if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
        throw Error("blossom solver: bad edge (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
      tw_[k] = 2 * weights[k];
      max_weight_ = std::max(max_weight_, weights[k]);
    }
    if (max_weight_ < 0) max_weight_ = 0;

    endpoint_.resize(2 * m_);
    for (int p = 0; p < 2 * m_; ++p)
      endpoint_[p] = (p & 1) ? ends_[p >> 1].second : ends_[p >> 1].first;

    // CSR adjacency of remote endpoints: edge k contributes 2k+1 at ends.first
    // and 2k at ends.second.
    nbe_off_.assign(n_ + 1, 0);
    for (int k = 0; k < m_; ++k) {
      ++nbe_off_[ends_[k].first + 1];
      ++nbe_off_[ends_[k].second + 1];
    }
    for (int v = 0; v < n_; ++v) nbe_off_[v + 1] += nbe_off_[v];
    nbe_.resize(2 * m_);
    std::vector<std::int32_t> cur(nbe_off_.begin(), nbe_off_.end() - 1);
    for (int k = 0; k < m_; ++k) {
      nbe_[cur[ends_[k].first]++] = 2 * k + 1;
      nbe_[cur[ends_[k].second]++] = 2 * k;
    }

    mate_.assign(n_, -1);
    label_.assign(2 * n_, 0);
    labelend_.assign(2 * n_, -1);
    inblossom_.resize(n_);
    for (int v = 0; v < n_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * n_, -1);
    blossomchilds_.assign(2 * n_, {});
    blossombase_.assign(2 * n_, -1);
    for (int v = 0; v < n_; ++v) blossombase_[v] = v;
    blossomendps_.assign(2 * n_, {});
    bestedge_.assign(2 * n_, -1);
    blossombestedges_.assign(2 * n_, {});
    unusedblossoms_.resize(n_);
    for (int b = 0; b < n_; ++b) unusedblossoms_[b] = n_ + b;
    dualvar_.assign(2 * n_, 0);
    for (int v = 0; v < n_; ++v) dualvar_[v] = max_weight_;
    allowedge_.assign(m_, 0);
  }

  void solve() {
    if (greedy_init_) greedy_start();
    for (int stage = 0; stage < n_; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (int b = n_; b < 2 * n_; ++b) blossombestedges_[b].clear();
      std::fill(allowedge_.begin(), allowedge_.end(), 0);
      queue_.clear();

      for (int v = 0; v < n_; ++v)
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

      bool augmented = false;
      for (;;) {  // substages
        while (!queue_.empty() && !augmented) {
          const int v = queue_.back();
          queue_.pop_back();
          assert(label_[inblossom_[v]] == 1);
          const auto begin = nbe_off_[v], end = nbe_off_[v + 1];
          for (std::int32_t idx = begin; idx < end; ++idx) {
            const int p = nbe_[idx];
            const int k = p >> 1;
            const int w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            std::int64_t kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = 1;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                const int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                assert(label_[inblossom_[w]] == 2);
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              const int b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b]))
                bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w]))
                bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        // Dual adjustment: the binding constraint decides the step type.
        int deltatype = -1;
        std::int64_t delta = 0;
        int deltaedge = -1, deltablossom = -1;
        if (!maxcard_) {
          deltatype = 1;
          delta = std::max<std::int64_t>(
              0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n_));
        }
        for (int v = 0; v < n_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            const std::int64_t d = slack(bestedge_[v]);
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (int b = 0; b < 2 * n_; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            const std::int64_t ks = slack(bestedge_[b]);
            if (ks % 2 != 0)
              throw Error("blossom solver: odd S-S slack; duals left the "
                          "integral lattice (weights must be even)");
            const std::int64_t d = ks / 2;
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (int b = n_; b < 2 * n_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 &&
              label_[b] == 2 && (deltatype == -1 || dualvar_[b] < delta)) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }
        if (deltatype == -1) {
          // No slack left anywhere: maximum cardinality reached.
          deltatype = 1;
          delta = std::max<std::int64_t>(
              0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n_));
        }

        if (delta != 0) {
          for (int v = 0; v < n_; ++v) {
            const int lb = label_[inblossom_[v]];
            if (lb == 1)
              dualvar_[v] -= delta;
            else if (lb == 2)
              dualvar_[v] += delta;
          }
          for (int b = n_; b < 2 * n_; ++b) {
            if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
              if (label_[b] == 1)
                dualvar_[b] += delta;
              else if (label_[b] == 2)
                dualvar_[b] -= delta;
            }
          }
        }

        if (deltatype == 1) break;
        if (deltatype == 2) {
          allowedge_[deltaedge] = 1;
          int i = ends_[deltaedge].first;
          if (label_[inblossom_[i]] == 0) i = ends_[deltaedge].second;
          assert(label_[inblossom_[i]] == 1);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = 1;
          assert(label_[inblossom_[ends_[deltaedge].first]] == 1);
          queue_.push_back(ends_[deltaedge].first);
        } else {
          expand_blossom(deltablossom, false);
        }
      }

      if (!augmented) break;

      for (int b = n_; b < 2 * n_; ++b)
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 &&
            label_[b] == 1 && dualvar_[b] == 0)
          expand_blossom(b, true);
    }
    // The warm start leaves unmatched vertices with unequal duals, which is
    // fine for the perfect-matching certificate (no vertex stays single) but
    // not for the maximum-cardinality one; callers using the warm start treat
    // an incomplete matching as "no perfect matching exists" instead.
    if (!greedy_init_ || all_matched()) verify_optimum();
  }

  std::vector<std::int32_t> mate_vertices() const {
    std::vector<std::int32_t> out(n_, -1);
    for (int v = 0; v < n_; ++v)
      if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
    return out;
  }

  std::vector<std::int32_t> matched_edges() const {
    std::vector<std::int32_t> out;
    for (int v = 0; v < n_; ++v)
      if (mate_[v] >= 0 && v < endpoint_[mate_[v]]) out.push_back(mate_[v] >> 1);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool all_matched() const {
    return std::all_of(mate_.begin(), mate_.end(),
                       [](std::int32_t m) { return m >= 0; });
  }

 private:
  std::int64_t slack(int k) const {
    return dualvar_[ends_[k].first] + dualvar_[ends_[k].second] - tw_[k];
  }

  // Warm start: drop each vertex dual to half its best incident weight
  // (rounded up to even, preserving the integral parity of the duals), which
  // keeps every edge feasible and makes mutual-best edges tight, then match
  // greedily across tight edges. A second pass lowers each still-free vertex
  // by the largest even amount its slacks allow and matches again. Matched
  // edges stay tight and duals stay feasible, so the main loop starts from a
  // valid state with far fewer augmentation stages left; the certificate at
  // the end is unaffected.
  void greedy_start() {
    constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::min();
    for (int v = 0; v < n_; ++v) {
      std::int64_t best = kNone;
      for (std::int32_t idx = nbe_off_[v]; idx < nbe_off_[v + 1]; ++idx)
        best = std::max(best, tw_[nbe_[idx] >> 1]);
      if (best == kNone) continue;  // isolated vertex: any dual is feasible
      const std::int64_t half = best - best / 2;  // ceil for negative weights
      dualvar_[v] = (half % 2 == 0) ? half : half + 1;
    }
    for (int k = 0; k < m_; ++k) {
      const auto [i, j] = ends_[k];
      if (mate_[i] == -1 && mate_[j] == -1 && slack(k) == 0) {
        mate_[i] = 2 * k + 1;
        mate_[j] = 2 * k;
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] != -1) continue;
      std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
      for (std::int32_t idx = nbe_off_[v]; idx < nbe_off_[v + 1]; ++idx)
        dmin = std::min(dmin, slack(nbe_[idx] >> 1));
      if (dmin == std::numeric_limits<std::int64_t>::max()) continue;
      dualvar_[v] -= dmin & ~std::int64_t{1};
      for (std::int32_t idx = nbe_off_[v]; idx < nbe_off_[v + 1]; ++idx) {
        const int p = nbe_[idx];
        const int w = endpoint_[p];
        if (mate_[w] == -1 && slack(p >> 1) == 0) {
          mate_[v] = p;
          mate_[w] = p ^ 1;
          break;
        }
      }
    }
  }

  template <class F>
  void for_leaves(int b, F&& f) const {
    if (b < n_) {
      f(b);
      return;
    }
    leaf_stack_.clear();
    leaf_stack_.push_back(b);
    while (!leaf_stack_.empty()) {
      const int t = leaf_stack_.back();
      leaf_stack_.pop_back();
      if (t < n_) {
        f(t);
      } else {
        for (int s : blossomchilds_[t]) leaf_stack_.push_back(s);
      }
    }
  }

  void assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    assert(label_[w] == 0 && label_[b] == 0);
    label_[w] = label_[b] = static_cast<std::int8_t>(t);
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      for_leaves(b, [&](int v) { queue_.push_back(v); });
    } else {
      const int base = blossombase_[b];
      assert(mate_[base] >= 0);
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  // Walks up from both ends of a tight S-S edge; returns the lowest common
  // tree ancestor's base vertex, or -1 when the ends lie in different trees
  // (an augmenting path).
  int scan_blossom(int v, int w) {
    path_.clear();
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      assert(label_[b] == 1);
      path_.push_back(b);
      label_[b] = 5;
      assert(labelend_[b] == mate_[blossombase_[b]]);
      if (labelend_[b] == -1) {
        v = -1;  // tree root
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        assert(label_[b] == 2);
        assert(labelend_[b] >= 0);
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path_) label_[b] = 1;
    return base;
  }

  // Contracts the odd cycle base..v--w..base (edge k joins v,w) into a fresh
  // blossom, inheriting the base's S label and pushing former T leaves onto
  // the queue.
  void add_blossom(int base, int k) {
    int v = ends_[k].first, w = ends_[k].second;
    const int bb = inblossom_[base];
    int bv = inblossom_[v], bw = inblossom_[w];
    assert(!unusedblossoms_.empty());
    const int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();

    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    auto& path = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    path.clear();
    endps.clear();

    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      assert(label_[bv] == 2 ||
             (label_[bv] == 1 && labelend_[bv] == mate_[blossombase_[bv]]));
      assert(labelend_[bv] >= 0);
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
      assert(label_[bw] == 2 ||
             (label_[bw] == 1 && labelend_[bw] == mate_[blossombase_[bw]]));
      assert(labelend_[bw] >= 0);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }

    assert(label_[bb] == 1);
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;

    for_leaves(b, [&](int lv) {
      if (label_[inblossom_[lv]] == 2) queue_.push_back(lv);
      inblossom_[lv] = b;
    });

    // Merge the children's best-edge lists into per-neighbour minima so the
    // delta-3 bookkeeping survives the contraction.
    bestedgeto_.assign(2 * n_, -1);
    for (int child : path) {
      if (blossombestedges_[child].empty()) {
        for_leaves(child, [&](int lv) {
          for (std::int32_t idx = nbe_off_[lv]; idx < nbe_off_[lv + 1]; ++idx)
            consider_best_edge_to(b, nbe_[idx] >> 1);
        });
      } else {
        for (int ek : blossombestedges_[child]) consider_best_edge_to(b, ek);
      }
      blossombestedges_[child].clear();
      bestedge_[child] = -1;
    }
    auto& bbe = blossombestedges_[b];
    bbe.clear();
    for (int ek : bestedgeto_)
      if (ek != -1) bbe.push_back(ek);
    bestedge_[b] = -1;
    for (int ek : bbe)
      if (bestedge_[b] == -1 || slack(ek) < slack(bestedge_[b]))
        bestedge_[b] = ek;
  }

  void consider_best_edge_to(int b, int k) {
    int j = ends_[k].second;
    if (inblossom_[j] == b) j = ends_[k].first;
    const int bj = inblossom_[j];
    if (bj != b && label_[bj] == 1 &&
        (bestedgeto_[bj] == -1 || slack(k) < slack(bestedgeto_[bj])))
      bestedgeto_[bj] = k;
  }

  void expand_blossom(int b, bool endstage) {
    for (int s : blossomchilds_[b]) {
      blossomparent_[s] = -1;
      if (s < n_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        for_leaves(s, [&](int v) { inblossom_[v] = s; });
      }
    }

    // Mid-stage expansion of a T-blossom: the path the label entered through
    // must be relabeled child by child; the parity trick picks the direction
    // that keeps matched edges interior.
    if (!endstage && label_[b] == 2) {
      assert(labelend_[b] >= 0);
      const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      const auto& childs = blossomchilds_[b];
      const auto& endps = blossomendps_[b];
      const int len = static_cast<int>(childs.size());
      int j = static_cast<int>(
          std::find(childs.begin(), childs.end(), entrychild) -
          childs.begin());
      int jstep, endptrick;
      if (j & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      auto at = [len](const std::vector<std::int32_t>& a, int idx) {
        return a[(idx % len + len) % len];
      };
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[at(endps, j - endptrick) ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[at(endps, j - endptrick) >> 1] = 1;
        j += jstep;
        p = at(endps, j - endptrick) ^ endptrick;
        allowedge_[p >> 1] = 1;
        j += jstep;
      }
      const int bv0 = at(childs, j);
      label_[endpoint_[p ^ 1]] = 2;
      label_[bv0] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv0] = p;
      bestedge_[bv0] = -1;
      j += jstep;
      while (at(childs, j) != entrychild) {
        const int bv = at(childs, j);
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        int reachable = -1;
        for_leaves(bv, [&](int v) {
          if (reachable == -1 && label_[v] != 0) reachable = v;
        });
        if (reachable != -1) {
          assert(label_[reachable] == 2);
          assert(inblossom_[reachable] == bv);
          label_[reachable] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(reachable, 2, labelend_[reachable]);
        }
        j += jstep;
      }
    }

    label_[b] = 0;
    labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  // Swaps matched/unmatched edges around the cycle of blossom b so that its
  // base moves to vertex v, recursing into sub-blossoms along the way.
  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= n_) augment_blossom(t, v);

    auto& childs = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    const int len = static_cast<int>(childs.size());
    const int i = static_cast<int>(
        std::find(childs.begin(), childs.end(), t) - childs.begin());
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    auto at = [len](const std::vector<std::int32_t>& a, int idx) {
      return a[(idx % len + len) % len];
    };
    while (j != 0) {
      j += jstep;
      int tt = at(childs, j);
      const int p = at(endps, j - endptrick) ^ endptrick;
      if (tt >= n_) augment_blossom(tt, endpoint_[p]);
      j += jstep;
      tt = at(childs, j);
      if (tt >= n_) augment_blossom(tt, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }

    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[b] = blossombase_[childs[0]];
    assert(blossombase_[b] == v);
  }

  // Augments along the path through tight edge k, flipping matched edges from
  // both endpoints back to their tree roots.
  void augment_matching(int k) {
    for (int side = 0; side < 2; ++side) {
      int s = side == 0 ? ends_[k].first : ends_[k].second;
      int p = side == 0 ? 2 * k + 1 : 2 * k;
      for (;;) {
        const int bs = inblossom_[s];
        assert(label_[bs] == 1);
        assert(labelend_[bs] == mate_[blossombase_[bs]]);
        if (bs >= n_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;  // reached a tree root
        const int t = endpoint_[labelend_[bs]];
        const int bt = inblossom_[t];
        assert(label_[bt] == 2);
        assert(labelend_[bt] >= 0);
        s = endpoint_[labelend_[bt]];
        const int j = endpoint_[labelend_[bt] ^ 1];
        assert(blossombase_[bt] == t);
        if (bt >= n_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  // Complementary slackness: duals feasible, every edge's slack non-negative
  // (counting duals of blossoms containing both ends), matched edges tight,
  // single vertices at zero dual, positive blossoms full. Throws on any
  // violation; this certifies the returned matching is optimal.
  void verify_optimum() const {
    std::int64_t vdualoffset = 0;
    const std::int64_t minv =
        *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
    if (maxcard_) vdualoffset = std::max<std::int64_t>(0, -minv);
    if (minv + vdualoffset < 0)
      throw Error("matching certificate: negative vertex dual");
    for (int b = n_; b < 2 * n_; ++b)
      if (blossombase_[b] >= 0 && dualvar_[b] < 0)
        throw Error("matching certificate: negative blossom dual");

    std::vector<std::int32_t> iblossoms, jblossoms;
    for (int k = 0; k < m_; ++k) {
      const auto [i, j] = ends_[k];
      std::int64_t s = dualvar_[i] + dualvar_[j] - tw_[k];
      iblossoms.assign(1, i);
      jblossoms.assign(1, j);
      while (blossomparent_[iblossoms.back()] != -1)
        iblossoms.push_back(blossomparent_[iblossoms.back()]);
      while (blossomparent_[jblossoms.back()] != -1)
        jblossoms.push_back(blossomparent_[jblossoms.back()]);
      std::reverse(iblossoms.begin(), iblossoms.end());
      std::reverse(jblossoms.begin(), jblossoms.end());
      for (std::size_t z = 0;
           z < std::min(iblossoms.size(), jblossoms.size()); ++z) {
        if (iblossoms[z] != jblossoms[z]) break;
        s += 2 * dualvar_[iblossoms[z]];
      }
      if (s < 0)
        throw Error("matching certificate: negative slack on edge " +
                    std::to_string(k));
      if ((mate_[i] >> 1) == k || (mate_[j] >> 1) == k) {
        if ((mate_[i] >> 1) != k || (mate_[j] >> 1) != k)
          throw Error("matching certificate: inconsistent mate arrays");
        if (s != 0)
          throw Error("matching certificate: matched edge " +
                      std::to_string(k) + " not tight");
      }
    }
    for (int v = 0; v < n_; ++v)
      if (mate_[v] == -1 && dualvar_[v] + vdualoffset != 0)
        throw Error("matching certificate: single vertex with nonzero dual");
    for (int b = n_; b < 2 * n_; ++b) {
      if (blossombase_[b] >= 0 && dualvar_[b] > 0) {
        const auto& endps = blossomendps_[b];
        if (endps.size() % 2 != 1)
          throw Error("matching certificate: positive blossom not odd");
        for (std::size_t z = 1; z < endps.size(); z += 2) {
          const int p = endps[z];
          if (mate_[endpoint_[p]] != (p ^ 1) || mate_[endpoint_[p ^ 1]] != p)
            throw Error("matching certificate: positive blossom not full");
        }
      }
    }
  }

  const int n_;
  const int m_;
  const bool maxcard_;
  const bool greedy_init_;
  std::vector<std::pair<std::int32_t, std::int32_t>> ends_;
  std::vector<std::int64_t> tw_;  // 2 * weight, so slacks stay integral
  std::int64_t max_weight_ = 0;
  std::vector<std::int32_t> endpoint_;
  std::vector<std::int32_t> nbe_off_, nbe_;
  std::vector<std::int32_t> mate_;  // remote endpoint index or -1
  std::vector<std::int8_t> label_;
  std::vector<std::int32_t> labelend_;
  std::vector<std::int32_t> inblossom_;
  std::vector<std::int32_t> blossomparent_;
  std::vector<std::vector<std::int32_t>> blossomchilds_;
  std::vector<std::int32_t> blossombase_;
  std::vector<std::vector<std::int32_t>> blossomendps_;
  std::vector<std::int32_t> bestedge_;
  std::vector<std::vector<std::int32_t>> blossombestedges_;
  std::vector<std::int32_t> unusedblossoms_;
  std::vector<std::int64_t> dualvar_;
  std::vector<std::int8_t> allowedge_;
  std::vector<std::int32_t> queue_;
  std::vector<std::int32_t> path_;
  std::vector<std::int32_t> bestedgeto_;
  mutable std::vector<std::int32_t> leaf_stack_;
};

}  // namespace

std::vector<std::int32_t> max_weight_matching(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const std::int64_t> weights, bool max_cardinality) {
  if (endpoints.size() != weights.size())
    throw Error("blossom solver: endpoint/weight size mismatch");
  if (num_vertices == 0 || endpoints.empty())
    return std::vector<std::int32_t>(num_vertices, -1);
  // Doubling makes every weight even, which keeps all duals integral: any
  // vertex entering the S/T classes does so across a tight edge, so S-duals
  // share parity and the S-S slack halved in the delta-3 step is exact.
  std::vector<std::int64_t> doubled(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k) doubled[k] = 2 * weights[k];
  BlossomSolver solver(num_vertices, endpoints, doubled, max_cardinality);
  solver.solve();
  return solver.mate_vertices();
}

std::vector<std::int32_t> blossom_min_weight_perfect(
    int num_vertices,
    std::span<const std::pair<std::int32_t, std::int32_t>> endpoints,
    std::span<const std::int64_t> weights) {
  if (endpoints.size() != weights.size())
    throw Error("blossom solver: endpoint/weight size mismatch");
  if (num_vertices % 2 != 0)
    throw NoPerfectMatching("odd vertex count admits no perfect matching");
  if (num_vertices == 0) return {};
  if (endpoints.empty())
    throw NoPerfectMatching("graph has vertices but no edges");

  const std::int64_t wmax = *std::max_element(weights.begin(), weights.end());
  const std::int64_t c = wmax + 1;
  std::vector<std::int64_t> transformed(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k)
    transformed[k] = 2 * (c - weights[k]);

  BlossomSolver solver(num_vertices, endpoints, transformed, true,
                       /*greedy_init=*/true);
  solver.solve();
  if (!solver.all_matched())
    throw NoPerfectMatching("graph admits no perfect matching");
  return solver.matched_edges();
}

}  // namespace dimerlab
