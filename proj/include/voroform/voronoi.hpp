#pragma once

#include <atomic>
#include <chrono>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "eutaxy.hpp"
#include "isometry.hpp"
#include "neighbor.hpp"

namespace voroform {

/**
 * Cheap arithmetic-equivalence invariants used to bucket classes before the
 * expensive isometry search. The last component is the sorted diagonal of the
 * minimal-vector Gram matrix (x_i^t Q x_i), which equivalence transports along
 * with Min; with every representative lambda-normalized it is constant per
 * class, so it can be compared across candidates safely.
 */
struct InvariantKey {
  Rat det;
  Rat lam;
  std::size_t pairs = 0;
  std::vector<Rat> diag_sorted;
  bool operator==(const InvariantKey&) const = default;
};

inline InvariantKey invariant_key_of(const QuadForm& q, const MinData& m) {
  InvariantKey k;
  k.det = determinant(q);
  k.lam = m.min_value;
  k.pairs = m.vectors.size();
  k.diag_sorted.assign(m.vectors.size(), m.min_value);
  return k;
}

/** One arithmetic (or T-) equivalence class of perfect forms. */
struct FormClass {
  enum class Eutaxy { eutactic, not_eutactic, unknown };
  QuadForm representative;  // lambda-normalized to the run's common minimum
  MinData min_data;
  InvariantKey invariant_key;
  bool is_perfect_classical = true;  // for T-runs: also perfect in the full space?
  Eutaxy eutaxy_status = Eutaxy::unknown;
  std::optional<long long> aut_order;
  std::vector<Rat> gram_invariant;  // cached equivalence prefilter key
};

/** Edge of the contiguity graph: from class `from` along its `ray_index`-th
 * extreme ray, Qn = rep(from) + rho * R reaches class `to`, with
 * witness^t * Qn * witness = rep(to). */
struct Edge {
  std::size_t from = 0;
  std::size_t ray_index = 0;
  std::size_t to = 0;
  Mat witness;
  VecR ray_coords;  // chart coordinates of the primitive ray direction R
  Rat rho;
};

/** Extreme ray that is positive semidefinite: no contiguous perfect form lies
 * on it (T-runs only; classical support cones have no such rays for d >= 2). */
struct DeadEnd {
  std::size_t from = 0;
  std::size_t ray_index = 0;
  VecR ray_coords;
};

enum class GraphStatus { complete, budget_exceeded, in_progress };

struct EnumBudgets {
  long long max_classes = 100000;
  long long cone_budget = 100000;    // intermediate-ray cap in extreme_rays
  long long neighbor_cap = 100000;   // short-vector cap inside neighbor steps
  long long aut_budget = 1000000;    // automorphism-count cap (0 skips the probe)
  double wall_seconds = 0;           // 0 = unlimited
  int jobs = 1;                      // parallel ray workers per class
};

struct VoronoiGraph {
  std::optional<TSpace> tspace;
  std::vector<FormClass> classes;
  std::vector<Edge> edges;
  std::vector<DeadEnd> dead_ends;
  GraphStatus status = GraphStatus::in_progress;
  int dim = 0;
  Rat lambda = 0;  // shared exact minimum of every representative
};

/** Voronoi's start vertex: the tridiagonal A_d form (2 on the diagonal, -1 on
 * the off-diagonals), perfect in every dimension. */
inline QuadForm first_perfect(int d) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = 2;
    if (i + 1 < d) m(i, i + 1) = m(i + 1, i) = -1;
  }
  QuadForm q(std::move(m));
  const Cone pc = support_cone(minimum(q), CoordMap::full_space(d));
  if (!lineality_space(pc).empty()) throw NotPointedException("start form is not perfect");
  return q;
}

namespace detail {

struct RayOutcome {
  bool dead = false;
  Rat rho;
  std::optional<QuadForm> qn;
  MinData mn;
  InvariantKey key;
  std::vector<Rat> gkey;          // gram prefilter key of qn (reused by the class)
  std::optional<std::size_t> to;  // equivalent class found among the snapshot
  std::optional<Mat> witness;
  std::exception_ptr error;
};

/** Equivalence test with precomputed minima and gram keys; in T-runs a witness
 * must map the subspace onto itself. */
inline std::optional<Mat> class_equivalent(const QuadForm& a, const MinData& ma,
                                           const std::vector<Rat>& key_a, const FormClass& cls,
                                           const CoordMap* t_chart) {
  return isometry_search(a, ma, cls.representative, cls.min_data, t_chart, &key_a,
                         &cls.gram_invariant);
}

inline RayOutcome process_ray(const QuadForm& rep, const VecR& ray, const CoordMap& chart,
                              const std::vector<FormClass>& classes, std::size_t snapshot,
                              const Rat& lam, const EnumBudgets& budgets, bool t_run, int dim) {
  RayOutcome out;
  const Mat r = chart.to_matrix(ray);
  if (is_positive_semidefinite(QuadForm(r))) {
    if (!t_run && dim >= 2)
      throw InternalErrorException("positive semidefinite extreme ray in a classical run");
    out.dead = true;
    return out;
  }
  NeighborResult nb = neighbor(rep, r, lam, budgets.neighbor_cap);
  out.rho = nb.rho;
  out.mn = minimum(nb.qn);
  out.key = invariant_key_of(nb.qn, out.mn);
  std::vector<Rat> gk = gram_key(nb.qn, out.mn);
  for (std::size_t j = 0; j < snapshot; ++j) {
    if (!(out.key == classes[j].invariant_key)) continue;
    auto u = class_equivalent(nb.qn, out.mn, gk, classes[j], t_run ? &chart : nullptr);
    if (u) {
      out.to = j;
      out.witness = std::move(u);
      break;
    }
  }
  if (out.to) {
    // Matched rays contribute only (to, witness, rho) to the merge; dropping
    // the form, its minimal-vector pool, and the gram key keeps the buffered
    // outcomes small (d=8 T-cones have many rays, each with a large pool).
    out.mn = MinData{};
  } else {
    out.gkey = std::move(gk);
    out.qn = std::move(nb.qn);
  }
  return out;
}

inline FormClass make_class(QuadForm rep, MinData md, InvariantKey key, std::vector<Rat> gkey,
                            const CoordMap& chart, bool t_run) {
  FormClass fc{std::move(rep), std::move(md), std::move(key), true, FormClass::Eutaxy::unknown,
               std::nullopt, std::move(gkey)};
  const Cone pc = support_cone(fc.min_data, chart);
  if (!lineality_space(pc).empty())
    throw NotPointedException("support cone of a class representative is not pointed");
  fc.is_perfect_classical =
      !t_run || lineality_space(support_cone(fc.min_data, CoordMap::full_space(fc.representative.dim()))).empty();
  return fc;
}

}  // namespace detail

/**
 * Graph traversal over the vertices of the Ryshkov polyhedron (restricted to T
 * when given): pop a class in FIFO order, enumerate the extreme rays of its
 * support cone in the working chart, follow each indefinite ray to the
 * contiguous perfect form, merge up to (T-)equivalence, record PSD rays as dead
 * ends. The start form must already be (T-)perfect; it is lambda-normalized to
 * minimum 2 and all discovered representatives share that minimum exactly.
 *
 * Determinism: classes are numbered in discovery order, rays processed in the
 * canonical order produced by extreme_rays, and parallel ray workers are merged
 * in ray order, so the result is independent of `jobs`.
 */
inline VoronoiGraph enumerate_from(const QuadForm& start, const std::optional<TSpace>& tspace,
                                   const EnumBudgets& budgets = {}) {
  const int d = start.dim();
  const bool t_run = tspace.has_value();
  if (t_run && tspace->dim_ambient != d) throw DimensionMismatchException();
  const CoordMap chart = t_run ? tspace->chart() : CoordMap::full_space(d);
  if (!chart.contains(start.mat())) throw NotInSubspaceException("start form outside the chart");
  if (!is_positive_definite(start)) throw NotPositiveDefiniteException();

  VoronoiGraph g;
  g.tspace = tspace;
  g.dim = d;
  g.lambda = 2;

  {
    const Rat lam0 = minimum(start).min_value;
    const QuadForm q0 = start.scaled(Rat(2) / lam0);
    MinData md = minimum(q0);
    InvariantKey key = invariant_key_of(q0, md);
    std::vector<Rat> gkey = detail::gram_key(q0, md);
    g.classes.push_back(
        detail::make_class(q0, std::move(md), std::move(key), std::move(gkey), chart, t_run));
  }

  const auto t0 = std::chrono::steady_clock::now();
  bool exceeded = false;
  for (std::size_t idx = 0; idx < g.classes.size() && !exceeded; ++idx) {
    if (budgets.wall_seconds > 0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
      if (elapsed.count() > budgets.wall_seconds) {
        exceeded = true;
        break;
      }
    }
    const Cone cone = support_cone(g.classes[idx].min_data, chart);
    const std::vector<VecR> rays = extreme_rays(cone, budgets.cone_budget);
    const QuadForm rep = g.classes[idx].representative;  // copy: vector may grow on merge
    const int jobs = std::max(1, budgets.jobs);

    // Rays are processed in fixed-size blocks: workers fill one block against
    // the classes visible at its start, then the block is merged serially in
    // ray order. Block boundaries cannot change the result -- the merge loop
    // re-checks classes appended after the block's snapshot -- but they bound
    // how many unmatched neighbor forms with their pools sit in memory at once.
    const std::size_t block = static_cast<std::size_t>(std::max(64, 8 * jobs));
    for (std::size_t base = 0; base < rays.size() && !exceeded; base += block) {
      const std::size_t lim = std::min(rays.size(), base + block);
      const std::size_t snapshot = g.classes.size();
      std::vector<detail::RayOutcome> out(lim - base);
      auto work = [&](std::size_t i) {
        try {
          out[i - base] = detail::process_ray(rep, rays[i], chart, g.classes, snapshot, g.lambda,
                                              budgets, t_run, d);
        } catch (...) {
          out[i - base].error = std::current_exception();
        }
      };
      if (jobs > 1 && lim - base > 1) {
        std::atomic<std::size_t> next{base};
        auto runner = [&]() {
          for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= lim) return;
            work(i);
          }
        };
        std::vector<std::thread> pool;
        const int nthreads = std::min<long long>(jobs, static_cast<long long>(lim - base));
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(runner);
        for (auto& th : pool) th.join();
      } else {
        for (std::size_t i = base; i < lim; ++i) work(i);
      }

      // Serial merge in ray order keeps class numbering and output canonical.
      for (std::size_t i = base; i < lim; ++i) {
        detail::RayOutcome& o = out[i - base];
        if (o.error) std::rethrow_exception(o.error);
        if (o.dead) {
          g.dead_ends.push_back({idx, i, rays[i]});
          continue;
        }
        std::optional<std::size_t> to = o.to;
        std::optional<Mat> witness = std::move(o.witness);
        if (!to) {
          // Workers only saw the snapshot; check classes appended since.
          for (std::size_t j = snapshot; j < g.classes.size() && !to; ++j) {
            if (!(o.key == g.classes[j].invariant_key)) continue;
            auto u = detail::class_equivalent(*o.qn, o.mn, o.gkey, g.classes[j],
                                              t_run ? &chart : nullptr);
            if (u) {
              to = j;
              witness = std::move(u);
            }
          }
        }
        if (!to) {
          if (static_cast<long long>(g.classes.size()) >= budgets.max_classes) {
            exceeded = true;
            break;
          }
          g.classes.push_back(
              detail::make_class(*o.qn, std::move(o.mn), o.key, std::move(o.gkey), chart, t_run));
          to = g.classes.size() - 1;
          witness = Mat::identity(d);
        }
        g.edges.push_back({idx, i, *to, std::move(*witness), rays[i], o.rho});
      }
    }
  }

  g.status = exceeded ? GraphStatus::budget_exceeded : GraphStatus::complete;

  // Classification post-pass, serial and in class order for determinism.
  for (FormClass& fc : g.classes) {
    fc.eutaxy_status = is_eutactic(fc.representative, fc.min_data).status ==
                               EutaxyCertificate::Status::eutactic
                           ? FormClass::Eutaxy::eutactic
                           : FormClass::Eutaxy::not_eutactic;
    if (budgets.aut_budget > 0)
      fc.aut_order = automorphism_group(fc.representative, budgets.aut_budget).order;
  }
  return g;
}

/** Classical enumeration from A_d, or the T-restricted run started at the
 * T-perfect form reached by descending from the subspace's PD witness. */
inline VoronoiGraph enumerate(int d, const std::optional<TSpace>& tspace = std::nullopt,
                              const EnumBudgets& budgets = {}) {
  if (!tspace) return enumerate_from(first_perfect(d), std::nullopt, budgets);
  if (tspace->dim_ambient != d) throw DimensionMismatchException();
  const QuadForm start = descend_to_t_perfect(QuadForm(tspace->pd_witness), *tspace);
  return enumerate_from(start, tspace, budgets);
}

/** Independent re-check of a finished graph; every failed line carries detail. */
struct VerifyReport {
  struct Item {
    std::string what;
    bool pass = true;
    std::string detail;
  };
  std::vector<Item> items;
  bool all_pass = true;

  void add(std::string what, bool pass, std::string detail = "") {
    all_pass = all_pass && pass;
    items.push_back({std::move(what), pass, std::move(detail)});
  }
};

/**
 * Re-derives, with no state shared with enumeration: per class positive
 * definiteness, exact lambda, pointedness of the support cone in the chart;
 * per edge the ray provenance, lambda preservation at Qn = rep + rho R, and the
 * unimodular witness identity U^t Qn U = rep(to); per dead end the PSD
 * property; and that every extreme ray of every class is consumed by exactly
 * one edge or dead end.
 */
inline VerifyReport verify_graph(const VoronoiGraph& g, long long cone_budget = 100000) {
  VerifyReport rep;
  if (g.status != GraphStatus::complete) {
    rep.add("status", false, "graph is not complete");
    return rep;
  }
  const bool t_run = g.tspace.has_value();
  const CoordMap chart = t_run ? g.tspace->chart() : CoordMap::full_space(g.dim);

  std::vector<std::vector<VecR>> rays(g.classes.size());
  for (std::size_t c = 0; c < g.classes.size(); ++c) {
    const FormClass& fc = g.classes[c];
    const std::string tag = "class " + std::to_string(c);
    bool pd = is_positive_definite(fc.representative);
    rep.add(tag + " positive definite", pd);
    if (!pd) continue;
    if (t_run)
      rep.add(tag + " in T", chart.contains(fc.representative.mat()));
    const MinData md = minimum(fc.representative);
    rep.add(tag + " lambda", md.min_value == g.lambda,
            "minimum " + rational_to_string(md.min_value));
    rep.add(tag + " min vectors", md.vectors == fc.min_data.vectors);
    const Cone cone = support_cone(md, chart);
    rep.add(tag + " pointed", lineality_space(cone).empty());
    rays[c] = extreme_rays(cone, cone_budget);
  }

  std::vector<std::vector<int>> used(g.classes.size());
  for (std::size_t c = 0; c < g.classes.size(); ++c) used[c].assign(rays[c].size(), 0);

  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Edge& ed = g.edges[e];
    const std::string tag = "edge " + std::to_string(e);
    if (ed.from >= g.classes.size() || ed.to >= g.classes.size() ||
        ed.ray_index >= rays[ed.from].size()) {
      rep.add(tag + " indices", false);
      continue;
    }
    used[ed.from][ed.ray_index] += 1;
    rep.add(tag + " ray", rays[ed.from][ed.ray_index] == ed.ray_coords);
    const Mat r = chart.to_matrix(ed.ray_coords);
    bool ok = ed.rho > 0;
    rep.add(tag + " rho positive", ok);
    if (!ok) continue;
    const QuadForm qn = g.classes[ed.from].representative.plus(ed.rho, r);
    rep.add(tag + " lambda preserved",
            is_positive_definite(qn) && minimum(qn).min_value == g.lambda);
    const Mat& u = ed.witness;
    const Rat du = u.rows() == g.dim && u.cols() == g.dim && u.is_integer() ? det(u) : Rat(0);
    rep.add(tag + " witness unimodular", du == 1 || du == -1);
    rep.add(tag + " witness maps",
            (du == 1 || du == -1) &&
                u.transposed() * qn.mat() * u == g.classes[ed.to].representative.mat());
  }

  for (std::size_t de = 0; de < g.dead_ends.size(); ++de) {
    const DeadEnd& dd = g.dead_ends[de];
    const std::string tag = "dead end " + std::to_string(de);
    if (dd.from >= g.classes.size() || dd.ray_index >= rays[dd.from].size()) {
      rep.add(tag + " indices", false);
      continue;
    }
    used[dd.from][dd.ray_index] += 1;
    rep.add(tag + " ray", rays[dd.from][dd.ray_index] == dd.ray_coords);
    rep.add(tag + " psd", is_positive_semidefinite(QuadForm(chart.to_matrix(dd.ray_coords))));
  }

  for (std::size_t c = 0; c < g.classes.size(); ++c) {
    bool cover = true;
    for (int k : used[c]) cover = cover && k == 1;
    rep.add("class " + std::to_string(c) + " ray coverage", cover);
  }
  return rep;
}

}  // namespace voroform
