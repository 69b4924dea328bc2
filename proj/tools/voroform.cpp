#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include <voroform.hpp>

namespace {

using namespace voroform;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;  // semantic "no": inequivalent forms, failed verification
constexpr int kExitParse = 2;     // unusable inputs: files, flags, formats
constexpr int kExitBudget = 3;    // enumeration stopped by a budget
constexpr int kExitInternal = 4;  // violated invariants or unexpected failures

std::optional<TSpace> build_tspace(const std::string& spec, int d) {
  if (spec.empty()) return std::nullopt;
  if (spec == "eisenstein") return invariant_space(eisenstein_group(d), 10000, "eisenstein");
  if (spec == "gaussian") return invariant_space(gaussian_group(d), 10000, "gaussian");
  if (spec == "hurwitz") return invariant_space(hurwitz_group(d), 10000, "hurwitz");
  if (spec.rfind("file:", 0) == 0) {
    TSpace t = read_tspace(spec.substr(5));
    if (t.dim_ambient != d) throw ParseException("subspace ambient dimension does not match --dim");
    return t;
  }
  throw ParseException("unknown --tspace value: " + spec +
                       " (expected eisenstein, gaussian, hurwitz or file:<path>)");
}

int cmd_enumerate(int dim, const std::string& tspec, const EnumBudgets& budgets,
                  const std::string& out_dir) {
  const std::optional<TSpace> ts = build_tspace(tspec, dim);
  const VoronoiGraph g = enumerate(dim, ts, budgets);
  write_run(out_dir, g, budgets);
  std::size_t extreme = 0;
  for (const FormClass& fc : g.classes)
    if (fc.is_perfect_classical && fc.eutaxy_status == FormClass::Eutaxy::eutactic) ++extreme;
  std::cout << "classes: " << g.classes.size() << "\n"
            << "extreme: " << extreme << "\n"
            << "dead ends: " << g.dead_ends.size() << "\n"
            << "status: " << (g.status == GraphStatus::complete ? "complete" : "budget_exceeded")
            << "\n"
            << "run written to: " << out_dir << "\n";
  return g.status == GraphStatus::complete ? kExitOk : kExitBudget;
}

int cmd_min(const std::string& path, bool json_out) {
  const QuadForm q = read_form(path);
  const MinData m = minimum(q);
  if (json_out) {
    OrderedJson j;
    j["lambda"] = rational_to_string(m.min_value);
    j["pairs"] = m.vectors.size();
    OrderedJson vecs = OrderedJson::array();
    for (const VecZ& v : m.vectors) {
      OrderedJson row = OrderedJson::array();
      for (const Int& x : v) row.push_back(x.str());
      vecs.push_back(std::move(row));
    }
    j["vectors"] = std::move(vecs);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "lambda = " << rational_to_string(m.min_value) << ", pairs = " << m.vectors.size()
              << "\n";
  }
  return kExitOk;
}

void print_matrix(const Mat& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) std::cout << (j ? " " : "") << rational_to_string(m(i, j));
    std::cout << "\n";
  }
}

int cmd_isom(const std::string& path_a, const std::string& path_b, bool json_out) {
  const QuadForm a = read_form(path_a);
  const QuadForm b = read_form(path_b);
  const std::optional<Mat> u = find_isometry(a, b);
  if (json_out) {
    OrderedJson j;
    j["equivalent"] = u.has_value();
    if (u) j["witness"] = detail::matrix_json(*u);
    std::cout << j.dump(2) << "\n";
  } else if (u) {
    std::cout << "equivalent, witness U with U^t A U = B:\n";
    print_matrix(*u);
  } else {
    std::cout << "not equivalent\n";
  }
  return u ? kExitOk : kExitNegative;
}

int cmd_classify(const std::string& path, bool json_out) {
  const QuadForm q = read_form(path);
  const MinData md = minimum(q);
  const bool perfect =
      lineality_space(support_cone(md, CoordMap::full_space(q.dim()))).empty();
  const EutaxyCertificate cert = is_eutactic(q, md);
  const bool eutactic = cert.status == EutaxyCertificate::Status::eutactic;
  const bool extreme = perfect && eutactic;
  if (json_out) {
    OrderedJson j;
    j["perfect"] = perfect;
    j["eutactic"] = eutactic;
    j["extreme"] = extreme;
    j["alpha_min"] = rational_to_string(cert.objective);
    if (cert.weights) {
      OrderedJson w;
      for (const auto& [vec, alpha] : *cert.weights) {
        std::string key;
        for (std::size_t i = 0; i < vec.size(); ++i) key += (i ? " " : "") + vec[i].str();
        w[key] = rational_to_string(alpha);
      }
      j["weights"] = std::move(w);
    } else {
      j["weights"] = nullptr;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "perfect: " << (perfect ? "yes" : "no") << ", eutactic: "
              << (eutactic ? "yes" : "no") << ", extreme: " << (extreme ? "yes" : "no") << "\n";
    std::cout << "alpha_min = " << rational_to_string(cert.objective) << "\n";
    if (cert.weights)
      for (const auto& [vec, alpha] : *cert.weights) {
        std::cout << "alpha[";
        for (std::size_t i = 0; i < vec.size(); ++i) std::cout << (i ? " " : "") << vec[i].str();
        std::cout << "] = " << rational_to_string(alpha) << "\n";
      }
  }
  return kExitOk;
}

int cmd_verify(const std::string& dir) {
  const LoadedRun run = load_run(dir);
  const VerifyReport rep = verify_graph(run.graph, run.budgets.cone_budget);
  std::size_t failed = 0;
  for (const auto& item : rep.items)
    if (!item.pass) {
      ++failed;
      std::cout << "FAIL " << item.what;
      if (!item.detail.empty()) std::cout << " (" << item.detail << ")";
      std::cout << "\n";
    }
  std::cout << "verify: " << rep.items.size() << " checks, " << failed << " failed\n";
  return rep.all_pass ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact enumeration and classification of perfect quadratic forms"};
  app.require_subcommand(1);

  int dim = 0;
  std::string tspec;
  std::string out_dir = "run";
  EnumBudgets budgets;
  CLI::App* en = app.add_subcommand("enumerate", "enumerate perfect forms up to equivalence");
  en->add_option("--dim", dim, "ambient dimension d")->required()->check(CLI::Range(1, 16));
  en->add_option("--tspace", tspec, "restrict to a form subspace: eisenstein, gaussian, hurwitz or file:<path>");
  en->add_option("--budget-classes", budgets.max_classes, "stop after this many classes");
  en->add_option("--budget-cone", budgets.cone_budget, "intermediate ray cap per support cone");
  en->add_option("--budget-neighbor", budgets.neighbor_cap, "short-vector cap per neighbor step");
  en->add_option("--budget-aut", budgets.aut_budget, "automorphism count cap (0 skips)");
  en->add_option("--budget-seconds", budgets.wall_seconds, "wall-clock limit, 0 = none");
  en->add_option("--jobs", budgets.jobs, "parallel ray workers (output independent of this)")
      ->check(CLI::Range(1, 256));
  en->add_option("--out", out_dir, "output directory (classes.json, graph.dot, ...)");

  std::string min_path;
  bool min_json = false;
  CLI::App* mn = app.add_subcommand("min", "arithmetical minimum and minimal vectors");
  mn->add_option("form", min_path, "form file")->required();
  mn->add_flag("--json", min_json, "machine-readable output");

  std::string isom_a, isom_b;
  bool isom_json = false;
  CLI::App* is = app.add_subcommand("isom", "decide arithmetical equivalence of two forms");
  is->add_option("a", isom_a, "first form file")->required();
  is->add_option("b", isom_b, "second form file")->required();
  is->add_flag("--json", isom_json, "machine-readable output");

  std::string classify_path;
  bool classify_json = false;
  CLI::App* cl = app.add_subcommand("classify", "perfect / eutactic / extreme verdicts");
  cl->add_option("form", classify_path, "form file")->required();
  cl->add_flag("--json", classify_json, "machine-readable output");

  std::string verify_dir;
  CLI::App* vf = app.add_subcommand("verify", "re-check a saved enumeration run");
  vf->add_option("dir", verify_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (en->parsed()) return cmd_enumerate(dim, tspec, budgets, out_dir);
    if (mn->parsed()) return cmd_min(min_path, min_json);
    if (is->parsed()) return cmd_isom(isom_a, isom_b, isom_json);
    if (cl->parsed()) return cmd_classify(classify_path, classify_json);
    if (vf->parsed()) return cmd_verify(verify_dir);
  } catch (const ParseException& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const BudgetExceededException& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ClosureBudgetExceededException& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitParse;
}
