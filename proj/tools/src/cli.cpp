#include "htq_cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "htq/assembly.hpp"
#include "htq/error.hpp"
#include "htq/mesh.hpp"
#include "htq/parallel.hpp"
#include "htq/quadrature.hpp"
#include "htq/solver.hpp"
#include "htq/spectral.hpp"
#include "htq_cli/output.hpp"
#include "htq_cli/presets.hpp"

#ifndef HTQ_VERSION
#define HTQ_VERSION "unknown"
#endif

namespace htq::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json versions() {
  return {{"htq", HTQ_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"cli11", CLI11_VERSION},
          {"compiler", __VERSION__}};
}

struct Outputs {
  std::string out;
  std::string meta;
  std::string plot;

  [[nodiscard]] fs::path data_path() const { return out; }
  [[nodiscard]] fs::path meta_path() const { return meta.empty() ? default_sidecar(out) : fs::path(meta); }

  [[nodiscard]] std::vector<fs::path> all() const {
    std::vector<fs::path> p{data_path(), meta_path()};
    if (!plot.empty()) p.emplace_back(plot);
    return p;
  }
};

void bind_outputs(CLI::App* sub, Outputs& o, bool with_plot) {
  sub->add_option("--out", o.out, "CSV output file")->required();
  sub->add_option("--meta", o.meta, "JSON metadata file (default: --out with extension .json)");
  if (with_plot) sub->add_option("--plot", o.plot, "also write a Python/matplotlib script plotting the CSV");
}

void outputs_json(json& args, const Outputs& o, bool with_plot) {
  args["out"] = o.out;
  args["meta"] = o.meta;
  if (with_plot) args["plot"] = o.plot;
}

struct Discretization {
  MeshSpec spec;
  TemporalMesh mesh;
  DegreeVector degrees;
  DofMap dofs;
};

Discretization discretize(const std::string& mesh_text, double horizon, const std::string& degree_text) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("--T must be positive");
  MeshSpec spec = parse_mesh_spec(mesh_text, horizon);
  TemporalMesh mesh = spec.build();
  DegreeVector degrees = parse_degree_spec(degree_text, mesh.num_elements());
  DofMap dofs(mesh, degrees);
  return {std::move(spec), std::move(mesh), std::move(degrees), std::move(dofs)};
}

json describe(const Discretization& d) {
  json bp = json::array();
  for (double t : d.mesh.breakpoints()) bp.push_back(t);
  json deg = json::array();
  for (int p : d.degrees.values()) deg.push_back(p);
  return {{"mesh", d.spec.to_string()},
          {"breakpoints", bp},
          {"degrees", deg},
          {"num_dofs", d.dofs.num_dofs()},
          {"theorem41_ok", d.mesh.theorem41_ok()}};
}

json orders_json(const QuadConfig& q) {
  return {{"k_reg", q.k_reg}, {"k_log", q.k_log}, {"k1", q.k1}, {"k2", q.k2},
          {"k3", q.k3},       {"k4", q.k4},       {"k5", q.k5}};
}

void warn_theorem41(const Discretization& d, std::ostream& err) {
  if (!d.mesh.theorem41_ok()) err << "htq: warning: max element size exceeds T/2; assembling anyway\n";
}

json metadata(const std::string& command, const json& args) {
  json meta;
  meta["tool"] = "htq";
  meta["config"] = {{"command", command}, {"args", args}};
  meta["versions"] = versions();
  return meta;
}

void commit(const Outputs& o, std::string csv, const json& meta, std::string plot = {}) {
  OutputSet set;
  set.add(o.data_path(), std::move(csv));
  set.add(o.meta_path(), meta.dump(2) + "\n");
  if (!o.plot.empty()) set.add(o.plot, std::move(plot));
  set.commit();
}

/// Path of the CSV as seen from the directory of the plot script.
std::string relative_to_plot(const Outputs& o) {
  const fs::path data = fs::absolute(o.data_path()).lexically_normal();
  const fs::path dir = fs::absolute(fs::path(o.plot)).lexically_normal().parent_path();
  return data.lexically_relative(dir).generic_string();
}

std::string plot_script(const Outputs& o, const std::string& body) {
  std::string s;
  s += "#!/usr/bin/env python3\n";
  s += "import csv\nimport math\nimport os\n\nimport matplotlib.pyplot as plt\n\n";
  s += "here = os.path.dirname(os.path.abspath(__file__))\n";
  s += "with open(os.path.join(here, \"" + relative_to_plot(o) + "\")) as fh:\n";
  s += "    rows = list(csv.DictReader(fh))\n\n";
  s += body;
  s += "fig.tight_layout()\n";
  s += "fig.savefig(os.path.splitext(os.path.abspath(__file__))[0] + \".png\", dpi=150)\n";
  return s;
}

// ---------------------------------------------------------------- assemble

struct AssembleOptions {
  std::string kind = "M";
  std::string mesh = "uniform:4";
  double T = 1.0;
  std::string degrees = "uniform:1";
  int K = 0;
  int threads = 0;
  Outputs io;
};

void bind(CLI::App* sub, AssembleOptions& o) {
  sub->add_option("--kind", o.kind, "matrix: M, A or B")->capture_default_str();
  sub->add_option("--mesh", o.mesh, "uniform:N | geometric:N:sigma | dyadic:N | explicit:t0,t1,...")
      ->capture_default_str();
  sub->add_option("--T", o.T, "time horizon")->capture_default_str();
  sub->add_option("--degrees", o.degrees, "uniform:p | ramp | p1,p2,...")->capture_default_str();
  sub->add_option("--K", o.K, "Gauss-Legendre order (0: default for the degrees)")->capture_default_str();
  sub->add_option("--threads", o.threads, "worker threads (0: HTQ_THREADS or all cores)")->capture_default_str();
  bind_outputs(sub, o.io, false);
}

int cmd_assemble(const AssembleOptions& o, std::ostream& err) {
  const MatrixKind kind = matrix_kind_from_string(o.kind);
  const Discretization d = discretize(o.mesh, o.T, o.degrees);
  const int pmax = d.degrees.max();
  const QuadConfig q = o.K > 0 ? QuadConfig::with_K(o.K, pmax) : QuadConfig::defaults(pmax);
  q.validate(pmax);
  if (o.threads < 0) throw InvalidArgument("--threads must be >= 0");
  OutputSet::check(o.io.all());
  warn_theorem41(d, err);

  const auto start = Clock::now();
  const GlobalMatrix g = assemble(kind, d.mesh, d.degrees, d.dofs, q, o.threads);
  const double elapsed = seconds_since(start);

  json args{{"kind", std::string(to_string(kind))}, {"mesh", o.mesh},   {"T", o.T},
            {"degrees", o.degrees},                  {"K", q.k_reg},    {"threads", o.threads}};
  outputs_json(args, o.io, false);
  json meta = metadata("assemble", args);
  meta["inputs"] = describe(d);
  meta["orders"] = orders_json(q);
  meta["matrix"] = {{"kind", std::string(to_string(kind))}, {"rows", g.values.rows()}, {"cols", g.values.cols()}};
  meta["timing"] = {{"assembly_s", elapsed}};
  commit(o.io, matrix_csv(g.values), meta);
  return kOk;
}

// ---------------------------------------------------------------- oracle

struct OracleOptions {
  std::string kind = "M";
  std::string mesh = "uniform:4";
  double T = 1.0;
  std::string degrees = "uniform:1";
  int KF = 4000;
  double tol = 1e-10;
  bool no_accelerate = false;
  Outputs io;
};

void bind(CLI::App* sub, OracleOptions& o) {
  sub->add_option("--kind", o.kind, "matrix: M, A or B")->capture_default_str();
  sub->add_option("--mesh", o.mesh, "mesh spec")->capture_default_str();
  sub->add_option("--T", o.T, "time horizon")->capture_default_str();
  sub->add_option("--degrees", o.degrees, "degree spec")->capture_default_str();
  sub->add_option("--KF", o.KF, "number of Fourier modes")->capture_default_str();
  sub->add_option("--tol", o.tol, "bound on |entry(KF) - entry(2 KF)|")->capture_default_str();
  sub->add_flag("--no-accelerate", o.no_accelerate, "plain truncated sums, no tail correction");
  bind_outputs(sub, o.io, false);
}

int cmd_oracle(const OracleOptions& o) {
  const MatrixKind kind = matrix_kind_from_string(o.kind);
  const Discretization d = discretize(o.mesh, o.T, o.degrees);
  SpectralConfig cfg;
  cfg.K_F = o.KF;
  cfg.tol = o.tol;
  cfg.accelerate = !o.no_accelerate;
  cfg.validate();
  OutputSet::check(o.io.all());

  const auto start = Clock::now();
  const OracleResult r = oracle_matrix(kind, d.mesh, d.dofs, cfg);
  const double elapsed = seconds_since(start);

  json args{{"kind", std::string(to_string(kind))},
            {"mesh", o.mesh},
            {"T", o.T},
            {"degrees", o.degrees},
            {"KF", o.KF},
            {"tol", o.tol},
            {"no-accelerate", o.no_accelerate}};
  outputs_json(args, o.io, false);
  json meta = metadata("oracle", args);
  meta["inputs"] = describe(d);
  meta["K_F"] = r.K_F;
  meta["tol"] = o.tol;
  meta["accelerated"] = r.accelerated;
  meta["selfconsistency"] = r.certificate;
  meta["timing"] = {{"oracle_s", elapsed}};
  commit(o.io, matrix_csv(r.matrix), meta);
  return kOk;
}

// ---------------------------------------------------------------- quad-study

struct QuadStudyOptions {
  std::string mesh = "dyadic:6";
  double T = 10.0;
  std::string degrees = "uniform:2";
  int Kmin = 2;
  int Kmax = 20;
  int KF = 4000;
  double tol = 1e-10;
  int threads = 0;
  Outputs io;
};

void bind(CLI::App* sub, QuadStudyOptions& o) {
  sub->add_option("--mesh", o.mesh, "mesh spec")->capture_default_str();
  sub->add_option("--T", o.T, "time horizon")->capture_default_str();
  sub->add_option("--degrees", o.degrees, "degree spec")->capture_default_str();
  sub->add_option("--Kmin", o.Kmin, "smallest Gauss-Legendre order")->capture_default_str();
  sub->add_option("--Kmax", o.Kmax, "largest Gauss-Legendre order")->capture_default_str();
  sub->add_option("--KF", o.KF, "Fourier modes of the reference matrices")->capture_default_str();
  sub->add_option("--tol", o.tol, "oracle certificate bound")->capture_default_str();
  sub->add_option("--threads", o.threads, "worker threads")->capture_default_str();
  bind_outputs(sub, o.io, true);
}

int cmd_quad_study(const QuadStudyOptions& o) {
  const Discretization d = discretize(o.mesh, o.T, o.degrees);
  const int pmax = d.degrees.max();
  if (o.Kmin < 1 || o.Kmax < o.Kmin) throw InvalidArgument("need 1 <= --Kmin <= --Kmax");
  std::vector<QuadConfig> configs;
  for (int K = o.Kmin; K <= o.Kmax; ++K) {
    configs.push_back(QuadConfig::with_K(K, pmax));
    configs.back().validate(pmax);
  }
  SpectralConfig cfg;
  cfg.K_F = o.KF;
  cfg.tol = o.tol;
  cfg.validate();
  if (o.threads < 0) throw InvalidArgument("--threads must be >= 0");
  OutputSet::check(o.io.all());

  const auto start = Clock::now();
  const OracleResult refM = oracle_matrix(MatrixKind::M, d.mesh, d.dofs, cfg);
  const OracleResult refA = oracle_matrix(MatrixKind::A, d.mesh, d.dofs, cfg);
  const OracleResult refB = oracle_matrix(MatrixKind::B, d.mesh, d.dofs, cfg);
  const double oracle_s = seconds_since(start);

  CsvTable table({"K", "errM", "errA", "errB"});
  json orders = json::array();
  for (const QuadConfig& q : configs) {
    const GlobalSet g = assemble_all(d.mesh, d.degrees, d.dofs, q, o.threads);
    const double eM = (g.M.values - refM.matrix).cwiseAbs().maxCoeff();
    const double eA = (g.A.values - refA.matrix).cwiseAbs().maxCoeff();
    const double eB = (g.B.values - refB.matrix).cwiseAbs().maxCoeff();
    table.add_row({std::to_string(q.k_reg), format_number(eM), format_number(eA), format_number(eB)});
    orders.push_back(orders_json(q));
  }
  const double total_s = seconds_since(start);

  json args{{"mesh", o.mesh}, {"T", o.T},   {"degrees", o.degrees}, {"Kmin", o.Kmin},
            {"Kmax", o.Kmax}, {"KF", o.KF}, {"tol", o.tol},         {"threads", o.threads}};
  outputs_json(args, o.io, true);
  json meta = metadata("quad-study", args);
  meta["inputs"] = describe(d);
  meta["orders"] = orders;
  meta["K_F"] = o.KF;
  meta["selfconsistency"] = {{"M", refM.certificate}, {"A", refA.certificate}, {"B", refB.certificate}};
  meta["columns"] = "K: Gauss-Legendre order; err*: max-norm distance of the assembled matrix to the reference";
  meta["timing"] = {{"oracle_s", oracle_s}, {"total_s", total_s}};

  std::string plot;
  if (!o.io.plot.empty()) {
    plot = plot_script(o.io,
                       "K = [int(r[\"K\"]) for r in rows]\n"
                       "fig, ax = plt.subplots(figsize=(6, 4))\n"
                       "for col, label, mark in ((\"errM\", \"M\", \"o\"), (\"errA\", \"A\", \"s\"), "
                       "(\"errB\", \"B\", \"^\")):\n"
                       "    ax.semilogy(K, [max(float(r[col]), 1e-17) for r in rows], marker=mark, label=label)\n"
                       "ax.set_xlabel(\"K\")\n"
                       "ax.set_ylabel(\"max-norm error\")\n"
                       "ax.grid(True, which=\"both\", alpha=0.3)\n"
                       "ax.legend()\n");
  }
  commit(o.io, table.str(), meta, plot);
  return kOk;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  std::string kind = "parabolic";
  double mu = 0.0;
  std::string f = "tpow:0.75";
  std::string study = "hp";
  double T = 1.0;
  int p = 2;
  double sigma = 0.17;
  int Nmin = 2;
  int Nmax = 0;
  std::string mesh = "uniform:4";
  std::string degrees = "uniform:2";
  int K = 20;
  int threads = 0;
  Outputs io;
};

void bind(CLI::App* sub, SolveOptions& o) {
  sub->add_option("--kind", o.kind, "parabolic (u' + mu u = f) or hyperbolic (u'' + mu u = f)")
      ->capture_default_str();
  sub->add_option("--mu", o.mu, "reaction coefficient, >= 0")->capture_default_str();
  sub->add_option("--f", o.f, "one | poly:c0,c1,... | tpow:alpha (exact solution t^alpha)")
      ->capture_default_str();
  sub->add_option("--study", o.study, "h (uniform meshes, degree p), hp (geometric, p_l = l) or single")
      ->capture_default_str();
  sub->add_option("--T", o.T, "time horizon")->capture_default_str();
  sub->add_option("--p", o.p, "h study: polynomial degree")->capture_default_str();
  sub->add_option("--sigma", o.sigma, "hp study: grading parameter")->capture_default_str();
  sub->add_option("--Nmin", o.Nmin, "first element count")->capture_default_str();
  sub->add_option("--Nmax", o.Nmax, "last element count (0: 10 for hp, 64 for h); h doubles N")
      ->capture_default_str();
  sub->add_option("--mesh", o.mesh, "single: mesh spec")->capture_default_str();
  sub->add_option("--degrees", o.degrees, "single: degree spec")->capture_default_str();
  sub->add_option("--K", o.K, "Gauss-Legendre order of the assembly")->capture_default_str();
  sub->add_option("--threads", o.threads, "worker threads")->capture_default_str();
  bind_outputs(sub, o.io, true);
}

int cmd_solve(SolveOptions o) {
  const OdeKind kind = ode_kind_from_string(o.kind);
  const RhsPreset preset = make_preset(o.f, kind, o.mu);
  StudyParams params;
  params.kind = study_kind_from_string(o.study);
  params.horizon = o.T;
  params.p = o.p;
  params.sigma = o.sigma;
  params.K = o.K;
  params.threads = o.threads;
  if (!(o.T > 0.0) || !std::isfinite(o.T)) throw InvalidArgument("--T must be positive");
  if (o.threads < 0) throw InvalidArgument("--threads must be >= 0");
  int pmax = 1;
  switch (params.kind) {
    case StudyKind::h:
      if (o.Nmax == 0) o.Nmax = 64;
      if (o.Nmin < 1 || o.Nmax < o.Nmin) throw InvalidArgument("h study needs 1 <= --Nmin <= --Nmax");
      if (o.p < 1 || o.p > 32) throw InvalidArgument("--p must be in [1, 32]");
      for (int N = o.Nmin; N <= o.Nmax; N *= 2) params.levels.push_back(N);
      pmax = o.p;
      break;
    case StudyKind::hp:
      if (o.Nmax == 0) o.Nmax = 10;
      if (o.Nmin < 2 || o.Nmax < o.Nmin) throw InvalidArgument("hp study needs 2 <= --Nmin <= --Nmax");
      if (o.Nmax > 32) throw InvalidArgument("hp study: --Nmax above the largest degree 32");
      if (!(o.sigma > 0.0 && o.sigma < 1.0)) throw InvalidArgument("--sigma must lie in (0, 1)");
      for (int N = o.Nmin; N <= o.Nmax; ++N) params.levels.push_back(N);
      pmax = o.Nmax;
      break;
    case StudyKind::single: {
      const Discretization d = discretize(o.mesh, o.T, o.degrees);
      params.mesh = d.spec;
      params.degrees = o.degrees;
      pmax = d.degrees.max();
      break;
    }
  }
  QuadConfig::with_K(o.K, pmax).validate(pmax);
  OutputSet::check(o.io.all());

  OdeProblem problem = preset.problem;
  const auto start = Clock::now();
  const std::vector<StudyRow> rows = run_study(params, problem);
  const double elapsed = seconds_since(start);

  CsvTable table({"N", "M", "L2", "H1semi", "bracket", "residual", "condition"});
  for (const StudyRow& r : rows) {
    table.add_row({std::to_string(r.N), std::to_string(r.M), format_number(r.errors.l2),
                   format_number(r.errors.h1semi), format_number(r.errors.bracket), format_number(r.residual),
                   format_number(r.condition)});
  }

  json args{{"kind", std::string(to_string(kind))},
            {"mu", o.mu},
            {"f", o.f},
            {"study", std::string(to_string(params.kind))},
            {"T", o.T},
            {"p", o.p},
            {"sigma", o.sigma},
            {"Nmin", o.Nmin},
            {"Nmax", o.Nmax},
            {"mesh", o.mesh},
            {"degrees", o.degrees},
            {"K", o.K},
            {"threads", o.threads}};
  outputs_json(args, o.io, true);
  json meta = metadata("solve", args);
  meta["problem"] = {{"description", preset.description}, {"exact_solution", preset.has_exact}};
  meta["levels"] = params.levels;
  meta["columns"] =
      "N elements, M degrees of freedom, L2 / H1semi / bracket = sqrt(L2 * H1semi) errors, relative residual, "
      "infinity-norm condition number";
  meta["timing"] = {{"total_s", elapsed}};

  std::string plot;
  if (!o.io.plot.empty()) {
    if (params.kind == StudyKind::h) {
      plot = plot_script(o.io,
                         "h = [" + format_number(o.T) +
                             " / int(r[\"N\"]) for r in rows]\n"
                             "fig, ax = plt.subplots(figsize=(6, 4))\n"
                             "for col in (\"L2\", \"H1semi\", \"bracket\"):\n"
                             "    ax.loglog(h, [float(r[col]) for r in rows], marker=\"o\", label=col)\n"
                             "ax.set_xlabel(\"h\")\n");
    } else {
      plot = plot_script(o.io,
                         "x = [math.sqrt(int(r[\"M\"])) for r in rows]\n"
                         "fig, ax = plt.subplots(figsize=(6, 4))\n"
                         "for col in (\"L2\", \"H1semi\", \"bracket\"):\n"
                         "    ax.semilogy(x, [float(r[col]) for r in rows], marker=\"o\", label=col)\n"
                         "ax.set_xlabel(\"sqrt(M)\")\n");
    }
    plot.insert(plot.find("fig.tight_layout()"),
                "ax.set_ylabel(\"error\")\nax.grid(True, which=\"both\", alpha=0.3)\nax.legend()\n");
  }
  commit(o.io, table.str(), meta, plot);
  return kOk;
}

// ---------------------------------------------------------------- rules dump

struct RulesOptions {
  std::string kind = "legendre";
  int K = 16;
  Outputs io;
};

void bind(CLI::App* sub, RulesOptions& o) {
  sub->add_option("--kind", o.kind, "legendre (weight 1) or log (weight -ln t), both on [0,1]")
      ->capture_default_str();
  sub->add_option("--K", o.K, "number of nodes")->capture_default_str();
  bind_outputs(sub, o.io, false);
}

int cmd_rules_dump(const RulesOptions& o) {
  if (o.kind != "legendre" && o.kind != "log") throw InvalidArgument("--kind must be legendre or log");
  if (o.K < 1 || o.K > kMaxGaussOrder) throw InvalidArgument("--K must lie in [1, 64]");
  OutputSet::check(o.io.all());
  const GaussRule& rule = o.kind == "legendre" ? gauss_legendre(o.K) : gauss_log(o.K);
  CsvTable table({"node", "weight"});
  for (std::size_t i = 0; i < rule.size(); ++i) table.add_row({rule.nodes[i], rule.weights[i]}, 18);
  json args{{"kind", o.kind}, {"K", o.K}};
  outputs_json(args, o.io, false);
  json meta = metadata("rules dump", args);
  meta["weight"] = o.kind == "legendre" ? "1 on [0,1]" : "-ln t on [0,1]";
  commit(o.io, table.str(), meta);
  return kOk;
}

// ---------------------------------------------------------------- replay

std::string arg_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  throw UsageError("config: unsupported value " + v.dump());
}

/// Rebuilds the argument list of a run from its metadata file; later
/// "--name value" (or "--flag") tokens override recorded values.
std::vector<std::string> replay_args(const std::string& file, const std::vector<std::string>& overrides) {
  std::ifstream is(file);
  if (!is) throw IoError("cannot read config '" + file + "'");
  json meta;
  try {
    meta = json::parse(is);
  } catch (const json::exception& e) {
    throw UsageError("config '" + file + "': " + e.what());
  }
  if (!meta.contains("config") || !meta["config"].contains("command") || !meta["config"].contains("args")) {
    throw UsageError("config '" + file + "' has no config.command / config.args");
  }
  json args = meta["config"]["args"];
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    const std::string& tok = overrides[i];
    if (!tok.starts_with("--")) throw UsageError("config override '" + tok + "' is not an option");
    const std::string key = tok.substr(2);
    if (i + 1 < overrides.size() && !overrides[i + 1].starts_with("--")) {
      args[key] = overrides[++i];
    } else {
      args[key] = true;
    }
  }
  std::vector<std::string> out;
  std::istringstream cmd(meta["config"]["command"].get<std::string>());
  for (std::string word; cmd >> word;) out.push_back(word);
  for (const auto& [key, value] : args.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back("--" + key);
      continue;
    }
    const std::string text = arg_text(value);
    if (text.empty()) continue;
    out.push_back("--" + key);
    out.push_back(text);
  }
  return out;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"htq: modified Hilbert transformation matrices for temporal finite elements", "htq"};
  app.require_subcommand(1);
  app.footer("Replay a run: htq --config <metadata.json> [--option value ...]\n"
             "Exit codes: 0 ok, 1 computational failure, 2 usage or I/O error. HTQ_THREADS caps parallelism.");

  AssembleOptions assemble_opt;
  OracleOptions oracle_opt;
  QuadStudyOptions study_opt;
  SolveOptions solve_opt;
  RulesOptions rules_opt;
  auto* s_assemble = app.add_subcommand("assemble", "assemble M, A or B and write it as CSV");
  auto* s_oracle = app.add_subcommand("oracle", "reference matrix from the Fourier series definition");
  auto* s_study = app.add_subcommand("quad-study", "assembly error against the reference over a range of K");
  auto* s_solve = app.add_subcommand("solve", "solve the model ODE on a sequence of meshes");
  auto* s_rules = app.add_subcommand("rules", "quadrature rules");
  s_rules->require_subcommand(1);
  auto* s_dump = s_rules->add_subcommand("dump", "write nodes and weights as CSV");
  bind(s_assemble, assemble_opt);
  bind(s_oracle, oracle_opt);
  bind(s_study, study_opt);
  bind(s_solve, solve_opt);
  bind(s_dump, rules_opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  }

  if (s_assemble->parsed()) return cmd_assemble(assemble_opt, err);
  if (s_oracle->parsed()) return cmd_oracle(oracle_opt);
  if (s_study->parsed()) return cmd_quad_study(study_opt);
  if (s_solve->parsed()) return cmd_solve(solve_opt);
  if (s_dump->parsed()) return cmd_rules_dump(rules_opt);
  throw UsageError("no command given");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto fail = [&](int code, const std::string& what) {
    err << "htq: error: " << one_line(what) << '\n';
    return code;
  };
  try {
    if (!args.empty() && args.front() == "--config") {
      if (args.size() < 2) throw UsageError("--config needs a file");
      return dispatch(replay_args(args[1], {args.begin() + 2, args.end()}), out, err);
    }
    return dispatch(args, out, err);
  } catch (const CLI::ParseError& e) {
    return fail(kUsageError, e.what());
  } catch (const UsageError& e) {
    return fail(kUsageError, e.what());
  } catch (const InvalidArgument& e) {
    return fail(kUsageError, e.what());
  } catch (const IoError& e) {
    return fail(kUsageError, e.what());
  } catch (const NonConvergence& e) {
    return fail(kComputeFailure, e.what());
  } catch (const SingularSystem& e) {
    return fail(kComputeFailure, e.what());
  } catch (const std::exception& e) {
    return fail(kComputeFailure, e.what());
  }
}

}  // namespace htq::cli
