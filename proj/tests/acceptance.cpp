// Acceptance runner: executes every gating criterion and prints exactly one
// PASS/FAIL line per criterion.  Exit status is the number of failed criteria.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <voroform.hpp>

using namespace voroform;

namespace {

using Rng = std::mt19937_64;

int rand_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

QuadForm random_pd_form(Rng& rng, int d) {
  Mat b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = rand_int(rng, -2, 2);
  return QuadForm(b.transposed() * b + Mat::identity(d));
}

Mat random_unimodular(Rng& rng, int d, int steps = 6) {
  Mat u = Mat::identity(d);
  for (int s = 0; s < steps; ++s) {
    Mat e = Mat::identity(d);
    const int kind = rand_int(rng, 0, 3);
    const int i = rand_int(rng, 0, d - 1);
    const int j = rand_int(rng, 0, d - 1);
    if (kind <= 1) {
      if (i == j) continue;
      e(i, j) = rand_int(rng, -2, 2);
    } else if (kind == 2) {
      if (i == j) continue;
      e(i, i) = e(j, j) = 0;
      e(i, j) = e(j, i) = 1;
    } else {
      e(i, i) = -1;
    }
    u = u * e;
  }
  return u;
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Shared state: every gating enumeration, run twice (serial and --jobs 4),
// with byte-level output comparison feeding criterion 5.

struct Runs {
  std::map<std::string, VoronoiGraph> graph;
  std::map<std::string, std::filesystem::path> dir;
  bool determinism_ok = true;
  std::string determinism_detail;

  void add(const std::string& tag, int dim, const std::optional<TSpace>& t, EnumBudgets budgets) {
    const auto base = std::filesystem::temp_directory_path() / "voroform_acceptance";
    const auto dir_a = base / (tag + "_a");
    const auto dir_b = base / (tag + "_b");
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);

    budgets.jobs = 1;
    VoronoiGraph a = enumerate(dim, t, budgets);
    write_run(dir_a.string(), a, budgets);

    EnumBudgets par = budgets;
    par.jobs = 4;
    VoronoiGraph b = enumerate(dim, t, par);
    write_run(dir_b.string(), b, par);

    for (const char* f :
         {"classes.json", "edges.json", "deadends.json", "meta.json", "graph.dot", "report.md"}) {
      if (read_bytes(dir_a / f) != read_bytes(dir_b / f)) {
        determinism_ok = false;
        if (determinism_detail.empty())
          determinism_detail = tag + "/" + f + " differs between --jobs 1 and --jobs 4";
      }
    }
    dir[tag] = dir_a;
    graph.emplace(tag, std::move(a));
  }
};

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (detail.empty()) detail = why;
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

// ---------------------------------------------------------------------------
// Criterion 5 property suites.

void shortvec_box_suite(Outcome& out) {
  Rng rng(11001);
  for (int it = 0; it < 200; ++it) {
    const int d = rand_int(rng, 1, 4);
    const QuadForm q = random_pd_form(rng, d);
    Rat minq = q(0, 0);
    for (int i = 1; i < d; ++i) minq = std::min(minq, q(i, i));
    const Rat c = minq * Rat(rand_int(rng, 2, 4), 2);

    const Mat inv = inverse(q.mat());
    std::vector<Int> bound(d);
    for (int i = 0; i < d; ++i) {
      const Rat limit = c * inv(i, i);
      Int b = 0;
      while (Rat((b + 1) * (b + 1)) <= limit) ++b;
      bound[i] = b;
    }
    std::vector<VecZ> want;
    VecZ x(d, Int(0));
    for (int i = 0; i < d; ++i) x[i] = -bound[i];
    while (true) {
      bool zero = true;
      for (const auto& v : x)
        if (v != 0) zero = false;
      if (!zero && evaluate(q, x) <= c) {
        VecZ v = x;
        canonicalize_sign(v);
        want.push_back(std::move(v));
      }
      int i = 0;
      while (i < d && x[i] == bound[i]) {
        x[i] = -bound[i];
        ++i;
      }
      if (i == d) break;
      ++x[i];
    }
    std::sort(want.begin(), want.end(), lex_less);
    want.erase(std::unique(want.begin(), want.end()), want.end());

    if (vectors_below(q, c) != want) {
      out.fail("short-vector set mismatch at iteration " + std::to_string(it));
      return;
    }
  }
}

void cone_suite(Outcome& out) {
  Rng rng(11002);
  int done = 0;
  while (done < 100) {
    const int n = rand_int(rng, 2, 4);
    std::vector<VecR> normals;
    const int k = rand_int(rng, n, n + 3);
    for (int i = 0; i < k; ++i) {
      VecR a(n);
      bool nonzero = false;
      for (int j = 0; j < n; ++j) {
        a[j] = rand_int(rng, -3, 3);
        if (a[j] != 0) nonzero = true;
      }
      if (!nonzero) a[0] = 1;
      normals.push_back(primitive_integer_vector(a));
    }
    std::sort(normals.begin(), normals.end(), lex_less_rat);
    normals.erase(std::unique(normals.begin(), normals.end()), normals.end());
    Cone c;
    c.ambient_dim = n;
    c.h_rep = normals;
    if (!lineality_space(c).empty()) continue;

    std::vector<VecR> rays = extreme_rays(c);
    for (auto& r : rays) r = primitive_integer_vector(r);
    std::sort(rays.begin(), rays.end(), lex_less_rat);

    // Corank-1 oracle.
    for (const auto& r : rays) {
      std::vector<VecR> tight;
      for (const auto& a : normals) {
        const Rat s = dot(a, r);
        if (s < 0) {
          out.fail("infeasible ray returned");
          return;
        }
        if (s == 0) tight.push_back(a);
      }
      Mat m(static_cast<int>(tight.size()), n);
      for (std::size_t i = 0; i < tight.size(); ++i)
        for (int j = 0; j < n; ++j) m(static_cast<int>(i), j) = tight[i][j];
      if (rank(m) != n - 1) {
        out.fail("tight set rank is not corank 1");
        return;
      }
    }
    if (rays.empty()) continue;

    // Duality round trip.
    const Cone facets = facet_description(rays, n);
    std::vector<VecR> back = extreme_rays(facets);
    for (auto& r : back) r = primitive_integer_vector(r);
    std::sort(back.begin(), back.end(), lex_less_rat);
    if (back != rays) {
      out.fail("duality round trip changed the ray set");
      return;
    }
    ++done;
  }
}

void isometry_suite(Outcome& out) {
  Rng rng(11003);
  for (int it = 0; it < 100; ++it) {
    const int d = 2 + it % 4;  // dims 2..5
    const QuadForm q = random_pd_form(rng, d);
    const Mat u = random_unimodular(rng, d);
    const QuadForm qt = q.transformed(u);
    const auto w = find_isometry(q, qt);
    if (!w) {
      out.fail("no witness for an equivalent pair (iteration " + std::to_string(it) + ")");
      return;
    }
    const Rat dv = det(*w);
    if (!w->is_integer() || (dv != 1 && dv != -1) ||
        w->transposed() * q.mat() * *w != qt.mat()) {
      out.fail("returned witness fails verification");
      return;
    }
    // Determinant-mismatched pair must be rejected.
    if (are_equivalent(q, q.scaled(Rat(4)))) {
      out.fail("equivalence claimed across distinct determinants");
      return;
    }
  }
}

void eutaxy_suite(Outcome& out, const Runs& runs) {
  for (const char* tag : {"dim2", "dim3", "dim4", "dim5", "dim6"}) {
    const VoronoiGraph& g = runs.graph.at(tag);
    for (std::size_t ci = 0; ci < g.classes.size(); ++ci) {
      const FormClass& c = g.classes[ci];
      const EutaxyCertificate cert = is_eutactic(c.representative, c.min_data);
      const bool claimed = c.eutaxy_status == FormClass::Eutaxy::eutactic;
      if (claimed != (cert.status == EutaxyCertificate::Status::eutactic)) {
        out.fail(std::string(tag) + " class " + std::to_string(ci) + ": eutaxy status mismatch");
        return;
      }
      if (cert.status != EutaxyCertificate::Status::eutactic) continue;
      Mat acc(g.dim, g.dim);
      Rat wsum = 0;
      bool positive = true;
      for (const auto& [x, alpha] : *cert.weights) {
        if (alpha <= 0) positive = false;
        acc = acc + QuadForm::rank_one(x).mat().scaled(alpha * 2);
        wsum += alpha;
      }
      if (!positive || acc != inverse(c.representative).mat() ||
          wsum * 2 * c.min_data.min_value != g.dim) {
        out.fail(std::string(tag) + " class " + std::to_string(ci) +
                 ": certificate re-substitution failed");
        return;
      }
    }
  }
}

void neighbor_suite(Outcome& out, const Runs& runs) {
  for (const char* tag : {"dim2", "dim3", "dim4", "dim5"}) {
    const VoronoiGraph& g = runs.graph.at(tag);
    const CoordMap chart = CoordMap::full_space(g.dim);
    for (const Edge& e : g.edges) {
      const QuadForm& q = g.classes[e.from].representative;
      const MinData& md = g.classes[e.from].min_data;
      const Mat r = chart.to_matrix(e.ray_coords);
      const NeighborResult res = neighbor(q, r, g.lambda);
      if (res.rho != e.rho) {
        out.fail(std::string(tag) + ": recomputed rho differs on an edge");
        return;
      }
      const MinData mn = minimum(res.qn);
      if (mn.min_value != g.lambda) {
        out.fail(std::string(tag) + ": minimum not preserved along an edge");
        return;
      }
      bool grew = false;
      for (const auto& v : mn.vectors)
        if (std::find(md.vectors.begin(), md.vectors.end(), v) == md.vectors.end()) grew = true;
      if (!grew) {
        out.fail(std::string(tag) + ": minimal set did not grow along an edge");
        return;
      }
      // Candidate scan: rho is the least critical value among all vectors
      // that reach lambda by rho.
      const QuadForm rform{r};
      Rat oracle = -1;
      for (const auto& v : vectors_below(res.qn, g.lambda)) {
        const Rat rv = evaluate(rform, v);
        if (rv >= 0) continue;
        const Rat cand = (g.lambda - evaluate(q, v)) / rv;
        if (cand < res.rho) {
          out.fail(std::string(tag) + ": a vector crosses lambda before rho");
          return;
        }
        if (oracle < 0 || cand < oracle) oracle = cand;
      }
      if (oracle != res.rho) {
        out.fail(std::string(tag) + ": candidate-scan oracle disagrees with rho");
        return;
      }
    }
  }
}

void verify_suite(Outcome& out, const Runs& runs) {
  for (const auto& [tag, g] : runs.graph) {
    const VerifyReport rep = verify_graph(g);
    if (!rep.all_pass) {
      for (const auto& item : rep.items)
        if (!item.pass) {
          out.fail(tag + ": " + item.what +
                   (item.detail.empty() ? std::string() : " (" + item.detail + ")"));
          return;
        }
    }
  }
}

std::string max_density(const VoronoiGraph& g) {
  std::string best_str;
  Float best = -1;
  for (const auto& c : g.classes) {
    const Float d = packing_density(c.representative, c.min_data.min_value);
    if (d > best) {
      best = d;
      best_str = density_string(c.representative, c.min_data.min_value);
    }
  }
  return best_str;
}

Rat max_hermite(const VoronoiGraph& g) {
  Rat best = 0;
  for (const auto& c : g.classes)
    best = std::max(best, hermite_invariant_pow(c.representative, c.min_data.min_value));
  return best;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&failures](const char* name, const Outcome& out) {
    if (out.pass) {
      std::printf("[%s] PASS\n", name);
    } else {
      std::printf("[%s] FAIL: %s\n", name, out.detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  };

  Runs runs;
  {
    EnumBudgets classical;  // default budgets; automorphism orders wanted
    runs.add("dim2", 2, std::nullopt, classical);
    runs.add("dim3", 3, std::nullopt, classical);
    runs.add("dim4", 4, std::nullopt, classical);
    runs.add("dim5", 5, std::nullopt, classical);
    runs.add("dim6", 6, std::nullopt, classical);

    EnumBudgets tbudget;
    tbudget.aut_budget = 10000;  // invariant groups are huge; cap the probe
    for (int d : {2, 4, 6, 8})
      runs.add("eis" + std::to_string(d), d,
               invariant_space(eisenstein_group(d), 10000, "eisenstein"), tbudget);
    for (int d : {2, 4, 6, 8})
      runs.add("gau" + std::to_string(d), d,
               invariant_space(gaussian_group(d), 10000, "gaussian"), tbudget);
    for (int d : {4, 8})
      runs.add("hur" + std::to_string(d), d,
               invariant_space(hurwitz_group(d), 10000, "hurwitz"), tbudget);

    Mat e00(2, 2);
    e00(0, 0) = 1;
    runs.add("deadend", 2, tspace_from_basis(2, {Mat::identity(2), e00}), tbudget);
  }

  {  // C1: class counts, d = 2..6, plus the d = 6 extreme count.
    Outcome c1;
    const std::size_t want[5] = {1, 1, 2, 3, 7};
    const char* tags[5] = {"dim2", "dim3", "dim4", "dim5", "dim6"};
    for (int i = 0; i < 5; ++i) {
      const VoronoiGraph& g = runs.graph.at(tags[i]);
      c1.expect(g.status == GraphStatus::complete, std::string(tags[i]) + " did not complete");
      c1.expect(g.classes.size() == want[i],
                std::string(tags[i]) + ": " + std::to_string(g.classes.size()) + " classes, want " +
                    std::to_string(want[i]));
    }
    std::size_t extreme6 = 0;
    for (const auto& c : runs.graph.at("dim6").classes)
      if (c.is_perfect_classical && c.eutaxy_status == FormClass::Eutaxy::eutactic) ++extreme6;
    c1.expect(extreme6 == 6, "dim6: " + std::to_string(extreme6) + " extreme classes, want 6");
    report("C1", c1);
  }

  {  // C2: exact Hermite-constant powers.
    Outcome c2;
    const std::pair<const char*, Rat> want[5] = {
        {"dim2", Rat(4, 3)}, {"dim3", Rat(2)}, {"dim4", Rat(4)}, {"dim5", Rat(8)},
        {"dim6", Rat(64, 3)}};
    for (const auto& [tag, h] : want) {
      const Rat got = max_hermite(runs.graph.at(tag));
      c2.expect(got == h, std::string(tag) + ": hermite power " + rational_to_string(got) +
                              ", want " + rational_to_string(h));
    }
    report("C2", c2);
  }

  {  // C3: 4-decimal density prefixes.
    Outcome c3;
    const std::pair<const char*, const char*> want[] = {
        {"dim2", "0.9069"}, {"dim3", "0.7404"}, {"dim4", "0.6168"}, {"dim5", "0.4652"},
        {"dim6", "0.3729"}, {"eis8", "0.2536"}, {"gau2", "0.7853"}, {"gau6", "0.3229"},
        {"hur4", "0.6168"}, {"hur8", "0.2536"}};
    for (const auto& [tag, digits] : want) {
      const std::string got = max_density(runs.graph.at(tag));
      c3.expect(got == digits,
                std::string(tag) + ": max density " + got + ", want " + digits);
    }
    report("C3", c3);
  }

  {  // C4: subspace class counts and the one non-classical Eisenstein class.
    Outcome c4;
    const std::pair<const char*, std::size_t> want[] = {
        {"eis2", 1}, {"eis4", 1}, {"eis6", 2}, {"eis8", 5},
        {"gau2", 1}, {"gau4", 1}, {"gau6", 1}, {"gau8", 2},
        {"hur4", 1}, {"hur8", 1}};
    for (const auto& [tag, n] : want) {
      const VoronoiGraph& g = runs.graph.at(tag);
      c4.expect(g.status == GraphStatus::complete, std::string(tag) + " did not complete");
      c4.expect(g.classes.size() == n, std::string(tag) + ": " +
                                           std::to_string(g.classes.size()) + " classes, want " +
                                           std::to_string(n));
    }
    std::size_t nonclassical = 0;
    for (const auto& c : runs.graph.at("eis8").classes)
      if (!c.is_perfect_classical) ++nonclassical;
    c4.expect(nonclassical == 1, "eis8: " + std::to_string(nonclassical) +
                                     " non-classically-perfect classes, want exactly 1");
    report("C4", c4);
  }

  {  // C5: property suites.
    Outcome c5;
    shortvec_box_suite(c5);
    cone_suite(c5);
    isometry_suite(c5);
    eutaxy_suite(c5, runs);
    neighbor_suite(c5, runs);
    verify_suite(c5, runs);
    c5.expect(runs.determinism_ok, runs.determinism_detail);
    report("C5", c5);
  }

  {  // C6: dead ends are recorded and the run still completes.
    Outcome c6;
    const VoronoiGraph& g = runs.graph.at("deadend");
    c6.expect(g.status == GraphStatus::complete, "dead-end run did not complete");
    c6.expect(!g.dead_ends.empty(), "no dead ends recorded");
    const std::string json = read_bytes(runs.dir.at("deadend") / "deadends.json");
    c6.expect(json.find("\"from\"") != std::string::npos, "deadends.json has no entries");
    report("C6", c6);
  }

  return failures;
}
