#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "io.hpp"
#include "voronoi.hpp"

namespace voroform {

using OrderedJson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Lattice recognition: equivalence against built-in Gram matrices.
// ---------------------------------------------------------------------------

namespace detail {

/** 2I minus the adjacency of a simply-laced diagram on nodes 0..d-1. */
inline QuadForm diagram_form(int d, const std::vector<std::pair<int, int>>& links) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = 2;
  for (const auto& [i, j] : links) m(i, j) = m(j, i) = -1;
  return QuadForm(std::move(m));
}

inline QuadForm d_lattice(int d) {
  std::vector<std::pair<int, int>> links;
  for (int i = 0; i + 2 < d; ++i) links.push_back({i, i + 1});
  links.push_back({d - 3, d - 1});
  return diagram_form(d, links);
}

inline QuadForm e_lattice(int d) {
  // Chain 0-2-3-...-(d-1) with node 1 attached to node 3.
  std::vector<std::pair<int, int>> links{{0, 2}, {1, 3}};
  for (int i = 2; i + 1 < d; ++i) links.push_back({i, i + 1});
  return diagram_form(d, links);
}

/** Dual lattice rescaled to minimum 2 (E6* and E7* are perfect themselves). */
inline QuadForm dual_at_min_two(const QuadForm& q) {
  const QuadForm inv = inverse(q);
  return inv.scaled(Rat(2) / minimum(inv).min_value);
}

}  // namespace detail

/**
 * Name of the root lattice (or dual) whose Gram matrix is arithmetically
 * equivalent to q, among A_d, D_d (d >= 4), E6, E7, E8 and the duals E6*, E7*.
 */
inline std::optional<std::string> lattice_name(const QuadForm& q) {
  const int d = q.dim();
  std::vector<std::pair<std::string, QuadForm>> candidates;
  candidates.emplace_back("A" + std::to_string(d), first_perfect(d));
  if (d >= 4) candidates.emplace_back("D" + std::to_string(d), detail::d_lattice(d));
  if (d >= 6 && d <= 8) {
    const QuadForm e = detail::e_lattice(d);
    candidates.emplace_back("E" + std::to_string(d), e);
    if (d < 8) candidates.emplace_back("E" + std::to_string(d) + "*", detail::dual_at_min_two(e));
  }
  for (const auto& [name, cand] : candidates) {
    if (q.mat() == cand.mat()) return name;
    if (are_equivalent(q, cand)) return name;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON building blocks. All rationals appear as strings "p" or "p/q".
// ---------------------------------------------------------------------------

namespace detail {

inline OrderedJson matrix_json(const Mat& m) {
  OrderedJson rows = OrderedJson::array();
  for (int i = 0; i < m.rows(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rational_to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat matrix_from_json(const OrderedJson& j) {
  if (!j.is_array() || j.empty()) throw ParseException("expected a non-empty matrix array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.at(0).size());
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j.at(i).size()) != cols) throw ParseException("ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(i, c) = parse_rational(j.at(i).at(c).get<std::string>());
  }
  return m;
}

inline OrderedJson coords_json(const VecR& v) {
  OrderedJson a = OrderedJson::array();
  for (const Rat& r : v) a.push_back(rational_to_string(r));
  return a;
}

inline VecR coords_from_json(const OrderedJson& j) {
  VecR v;
  for (const auto& e : j) v.push_back(parse_rational(e.get<std::string>()));
  return v;
}

inline std::string status_string(GraphStatus s) {
  switch (s) {
    case GraphStatus::complete: return "complete";
    case GraphStatus::budget_exceeded: return "budget_exceeded";
    default: return "in_progress";
  }
}

inline GraphStatus status_from_string(const std::string& s) {
  if (s == "complete") return GraphStatus::complete;
  if (s == "budget_exceeded") return GraphStatus::budget_exceeded;
  if (s == "in_progress") return GraphStatus::in_progress;
  throw ParseException("unknown graph status: " + s);
}

inline std::string tspace_kind(const VoronoiGraph& g) {
  return g.tspace ? g.tspace->kind : "none";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Run artifacts.
// ---------------------------------------------------------------------------

inline std::vector<std::optional<std::string>> class_lattice_names(const VoronoiGraph& g) {
  std::vector<std::optional<std::string>> names;
  names.reserve(g.classes.size());
  for (const FormClass& fc : g.classes) names.push_back(lattice_name(fc.representative));
  return names;
}

inline OrderedJson classes_json(const VoronoiGraph& g,
                                const std::vector<std::optional<std::string>>& names) {
  OrderedJson j;
  j["dim"] = g.dim;
  j["lambda"] = rational_to_string(g.lambda);
  j["tspace"] = detail::tspace_kind(g);
  j["status"] = detail::status_string(g.status);
  OrderedJson arr = OrderedJson::array();
  for (std::size_t c = 0; c < g.classes.size(); ++c) {
    const FormClass& fc = g.classes[c];
    OrderedJson e;
    e["index"] = c;
    if (names[c])
      e["lattice"] = *names[c];
    else
      e["lattice"] = nullptr;
    e["form"] = detail::matrix_json(fc.representative.mat());
    e["lambda"] = rational_to_string(fc.min_data.min_value);
    e["det"] = rational_to_string(fc.invariant_key.det);
    e["min_pairs"] = fc.min_data.vectors.size();
    e["hermite_pow"] =
        rational_to_string(hermite_invariant_pow(fc.representative, fc.min_data.min_value));
    e["density"] = density_string(fc.representative, fc.min_data.min_value);
    e["is_perfect_classical"] = fc.is_perfect_classical;
    e["eutactic"] = fc.eutaxy_status == FormClass::Eutaxy::eutactic;
    e["extreme"] = fc.is_perfect_classical && fc.eutaxy_status == FormClass::Eutaxy::eutactic;
    if (fc.aut_order)
      e["aut_order"] = *fc.aut_order;
    else
      e["aut_order"] = nullptr;
    arr.push_back(std::move(e));
  }
  j["classes"] = std::move(arr);
  return j;
}

inline OrderedJson edges_json(const VoronoiGraph& g) {
  OrderedJson j;
  OrderedJson arr = OrderedJson::array();
  for (const Edge& e : g.edges) {
    OrderedJson o;
    o["from"] = e.from;
    o["ray"] = e.ray_index;
    o["ray_coords"] = detail::coords_json(e.ray_coords);
    o["rho"] = rational_to_string(e.rho);
    o["to"] = e.to;
    o["witness"] = detail::matrix_json(e.witness);
    arr.push_back(std::move(o));
  }
  j["edges"] = std::move(arr);
  return j;
}

inline OrderedJson deadends_json(const VoronoiGraph& g) {
  const CoordMap chart =
      g.tspace ? g.tspace->chart() : CoordMap::full_space(std::max(1, g.dim));
  OrderedJson j;
  OrderedJson arr = OrderedJson::array();
  for (const DeadEnd& de : g.dead_ends) {
    OrderedJson o;
    o["from"] = de.from;
    o["ray"] = de.ray_index;
    o["ray_coords"] = detail::coords_json(de.ray_coords);
    o["matrix"] = detail::matrix_json(chart.to_matrix(de.ray_coords));
    arr.push_back(std::move(o));
  }
  j["dead_ends"] = std::move(arr);
  return j;
}

inline OrderedJson meta_json(const VoronoiGraph& g, const EnumBudgets& budgets) {
  OrderedJson j;
  j["format"] = "voroform-run/1";
  j["dim"] = g.dim;
  j["lambda"] = rational_to_string(g.lambda);
  j["status"] = detail::status_string(g.status);
  if (g.tspace) {
    OrderedJson t;
    t["kind"] = g.tspace->kind;
    t["dim_ambient"] = g.tspace->dim_ambient;
    OrderedJson basis = OrderedJson::array();
    for (const Mat& b : g.tspace->basis) basis.push_back(detail::matrix_json(b));
    t["basis"] = std::move(basis);
    j["tspace"] = std::move(t);
  } else {
    j["tspace"] = nullptr;
  }
  OrderedJson b;
  b["max_classes"] = budgets.max_classes;
  b["cone_budget"] = budgets.cone_budget;
  b["neighbor_cap"] = budgets.neighbor_cap;
  b["aut_budget"] = budgets.aut_budget;
  b["wall_seconds"] = budgets.wall_seconds;
  j["budgets"] = std::move(b);
  return j;
}

/** DOT rendering: one node per class (id plus lattice name when recognized),
 * one undirected edge per contiguity record; loops and multi-edges kept. */
inline std::string graph_dot(const VoronoiGraph& g,
                             const std::vector<std::optional<std::string>>& names) {
  std::ostringstream os;
  os << "graph contiguity {\n";
  for (std::size_t c = 0; c < g.classes.size(); ++c) {
    os << "  c" << c << " [label=\"" << c;
    if (names[c]) os << ": " << *names[c];
    os << "\"];\n";
  }
  for (const Edge& e : g.edges)
    os << "  c" << e.from << " -- c" << e.to << " [label=\"" << e.ray_index << "\"];\n";
  os << "}\n";
  return os.str();
}

inline std::string report_md(const VoronoiGraph& g,
                             const std::vector<std::optional<std::string>>& names) {
  std::size_t extreme = 0;
  std::optional<Rat> max_hpow;
  std::optional<std::pair<Float, std::string>> max_density;
  for (const FormClass& fc : g.classes) {
    if (fc.is_perfect_classical && fc.eutaxy_status == FormClass::Eutaxy::eutactic) ++extreme;
    const Rat h = hermite_invariant_pow(fc.representative, fc.min_data.min_value);
    if (!max_hpow || h > *max_hpow) max_hpow = h;
    const Float dens = packing_density(fc.representative, fc.min_data.min_value);
    if (!max_density || dens > max_density->first)
      max_density = {dens, density_string(fc.representative, fc.min_data.min_value)};
  }

  std::ostringstream os;
  os << "# Perfect form enumeration\n\n";
  os << "- dimension: " << g.dim << "\n";
  os << "- subspace: " << detail::tspace_kind(g) << "\n";
  os << "- status: " << detail::status_string(g.status) << "\n";
  os << "- classes: " << g.classes.size() << "\n";
  os << "- extreme: " << extreme << "\n";
  os << "- dead ends: " << g.dead_ends.size() << "\n";
  if (max_hpow) os << "- max Hermite power (lambda^d / det): " << rational_to_string(*max_hpow) << "\n";
  if (max_density) os << "- max density: " << max_density->second << "\n";
  os << "\n";
  os << "| class | lattice | lambda | det | pairs | aut | classical | eutactic | extreme | density |\n";
  os << "|--:|:--|--:|--:|--:|--:|:--|:--|:--|--:|\n";
  for (std::size_t c = 0; c < g.classes.size(); ++c) {
    const FormClass& fc = g.classes[c];
    const bool eut = fc.eutaxy_status == FormClass::Eutaxy::eutactic;
    os << "| " << c << " | " << (names[c] ? *names[c] : "-") << " | "
       << rational_to_string(fc.min_data.min_value) << " | "
       << rational_to_string(fc.invariant_key.det) << " | " << fc.min_data.vectors.size() << " | ";
    if (fc.aut_order)
      os << *fc.aut_order;
    else
      os << "-";
    os << " | " << (fc.is_perfect_classical ? "yes" : "no") << " | " << (eut ? "yes" : "no")
       << " | " << (fc.is_perfect_classical && eut ? "yes" : "no") << " | "
       << density_string(fc.representative, fc.min_data.min_value) << " |\n";
  }
  return os.str();
}

namespace detail {

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ParseException("cannot write " + p.string());
  os << text;
}

inline std::string dump_json(const OrderedJson& j) { return j.dump(2) + "\n"; }

inline OrderedJson read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseException("cannot open " + p.string());
  try {
    return OrderedJson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseException(p.string() + ": " + e.what());
  }
}

}  // namespace detail

/** Writes classes.json, edges.json, deadends.json, meta.json, graph.dot and
 * report.md into `dir`; every byte is a function of graph and budgets alone. */
inline void write_run(const std::string& dir, const VoronoiGraph& g,
                      const EnumBudgets& budgets = {}) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto names = class_lattice_names(g);
  detail::write_text_file(fs::path(dir) / "classes.json", detail::dump_json(classes_json(g, names)));
  detail::write_text_file(fs::path(dir) / "edges.json", detail::dump_json(edges_json(g)));
  detail::write_text_file(fs::path(dir) / "deadends.json", detail::dump_json(deadends_json(g)));
  detail::write_text_file(fs::path(dir) / "meta.json", detail::dump_json(meta_json(g, budgets)));
  detail::write_text_file(fs::path(dir) / "graph.dot", graph_dot(g, names));
  detail::write_text_file(fs::path(dir) / "report.md", report_md(g, names));
}

struct LoadedRun {
  VoronoiGraph graph;
  EnumBudgets budgets;
};

/** Rebuilds a run from its directory. Minima and invariant keys are recomputed
 * exactly from the stored representatives; classification flags are taken from
 * the files. */
inline LoadedRun load_run(const std::string& dir) {
  namespace fs = std::filesystem;
  const OrderedJson meta = detail::read_json_file(fs::path(dir) / "meta.json");
  const OrderedJson cls = detail::read_json_file(fs::path(dir) / "classes.json");
  const OrderedJson edg = detail::read_json_file(fs::path(dir) / "edges.json");
  const OrderedJson dea = detail::read_json_file(fs::path(dir) / "deadends.json");

  LoadedRun run;
  VoronoiGraph& g = run.graph;
  try {
    g.dim = meta.at("dim").get<int>();
    g.lambda = parse_rational(meta.at("lambda").get<std::string>());
    g.status = detail::status_from_string(meta.at("status").get<std::string>());
    if (!meta.at("tspace").is_null()) {
      const OrderedJson& t = meta.at("tspace");
      const int da = t.at("dim_ambient").get<int>();
      std::vector<Mat> basis;
      for (const auto& b : t.at("basis")) basis.push_back(detail::matrix_from_json(b));
      TSpace ts = tspace_from_basis(da, basis);
      ts.kind = t.at("kind").get<std::string>();
      if (ts.kind == "eisenstein")
        ts.group = eisenstein_group(da);
      else if (ts.kind == "gaussian")
        ts.group = gaussian_group(da);
      else if (ts.kind == "hurwitz")
        ts.group = hurwitz_group(da);
      g.tspace = std::move(ts);
    }
    const OrderedJson& b = meta.at("budgets");
    run.budgets.max_classes = b.at("max_classes").get<long long>();
    run.budgets.cone_budget = b.at("cone_budget").get<long long>();
    run.budgets.neighbor_cap = b.at("neighbor_cap").get<long long>();
    run.budgets.aut_budget = b.at("aut_budget").get<long long>();
    run.budgets.wall_seconds = b.at("wall_seconds").get<double>();

    for (const auto& e : cls.at("classes")) {
      QuadForm rep(detail::matrix_from_json(e.at("form")));
      MinData md = minimum(rep);
      InvariantKey key = invariant_key_of(rep, md);
      FormClass fc{std::move(rep), std::move(md), std::move(key), true,
                   FormClass::Eutaxy::unknown, std::nullopt};
      fc.is_perfect_classical = e.at("is_perfect_classical").get<bool>();
      fc.eutaxy_status = e.at("eutactic").get<bool>() ? FormClass::Eutaxy::eutactic
                                                      : FormClass::Eutaxy::not_eutactic;
      if (!e.at("aut_order").is_null()) fc.aut_order = e.at("aut_order").get<long long>();
      g.classes.push_back(std::move(fc));
    }
    for (const auto& e : edg.at("edges")) {
      Edge ed;
      ed.from = e.at("from").get<std::size_t>();
      ed.ray_index = e.at("ray").get<std::size_t>();
      ed.ray_coords = detail::coords_from_json(e.at("ray_coords"));
      ed.rho = parse_rational(e.at("rho").get<std::string>());
      ed.to = e.at("to").get<std::size_t>();
      ed.witness = detail::matrix_from_json(e.at("witness"));
      g.edges.push_back(std::move(ed));
    }
    for (const auto& e : dea.at("dead_ends")) {
      DeadEnd de;
      de.from = e.at("from").get<std::size_t>();
      de.ray_index = e.at("ray").get<std::size_t>();
      de.ray_coords = detail::coords_from_json(e.at("ray_coords"));
      g.dead_ends.push_back(std::move(de));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseException(std::string("malformed run files: ") + e.what());
  }
  return run;
}

}  // namespace voroform
