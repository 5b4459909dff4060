#include "errinvar/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "errinvar/bandwidth.hpp"
#include "errinvar/bench.hpp"
#include "errinvar/deconv.hpp"
#include "errinvar/error.hpp"
#include "errinvar/errormodel.hpp"
#include "json.hpp"

namespace errinvar {
namespace {

using nlohmann::json;

// Bad flag values found after CLI11 parsing; exit 2 like parse errors.
struct ArgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}

double arg_double(const std::string& s, const std::string& what) {
  double v;
  if (!parse_double(s, v) || !std::isfinite(v)) throw ArgError("invalid " + what + ": '" + s + "'");
  return v;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path, std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::DataFormatError, "cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    if (first) {
      first = false;
      double tmp;
      if (!parse_double(cells[0], tmp)) {
        header = cells;
        for (auto& h : header) {
          h.erase(std::remove(h.begin(), h.end(), '"'), h.end());
          std::transform(h.begin(), h.end(), h.begin(), [](unsigned char c) { return std::tolower(c); });
        }
        continue;
      }
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

double cell(const std::vector<std::string>& row, std::size_t col, std::size_t line) {
  double v;
  if (col >= row.size() || !parse_double(row[col], v) || !std::isfinite(v))
    throw Error(ErrorCode::DataFormatError, "bad numeric value in data row " + std::to_string(line + 1));
  return v;
}

}  // namespace

Sample read_sample_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_rows(path, header);
  auto find = [&](const std::string& name) -> long {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<long>(it - header.begin());
  };
  long cw = 0, cy = 1, c1 = -1, c2 = -1;
  if (!header.empty()) {
    cw = find("w");
    cy = find("y");
    c1 = find("w1");
    c2 = find("w2");
    if (cy < 0 || (cw < 0 && (c1 < 0 || c2 < 0)))
      throw Error(ErrorCode::DataFormatError, "header must name columns y and w (or w1, w2)");
  } else if (!rows.empty() && rows.front().size() >= 4) {
    c1 = 2;
    c2 = 3;
  }
  Sample s;
  std::vector<double> w1, w2;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s.y.push_back(cell(rows[i], static_cast<std::size_t>(cy), i));
    if (c1 >= 0) {
      w1.push_back(cell(rows[i], static_cast<std::size_t>(c1), i));
      w2.push_back(cell(rows[i], static_cast<std::size_t>(c2), i));
    }
    if (cw >= 0) s.w.push_back(cell(rows[i], static_cast<std::size_t>(cw), i));
  }
  if (c1 >= 0) {
    auto r = Sample::from_replicates(s.y, w1, w2);
    if (cw >= 0)
      for (std::size_t j = 0; j < s.w.size(); ++j)
        if (std::abs(s.w[j] - r.w[j]) > 1e-12 * std::max(1.0, std::abs(r.w[j])))
          throw Error(ErrorCode::DataFormatError, "w differs from the replicate mean in row " + std::to_string(j + 1));
    s = std::move(r);
  }
  s.validate(2);
  return s;
}

Sample read_xy_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_rows(path, header);
  Sample s;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() < 2) throw Error(ErrorCode::DataFormatError, "expected two columns in row " + std::to_string(i + 1));
    s.w.push_back(cell(rows[i], 0, i));
    s.y.push_back(cell(rows[i], 1, i));
  }
  s.validate(2);
  return s;
}

namespace {

struct ErrorChoice {
  std::string spec = "none";
  ErrorModel model;
  json describe;
};

ErrorChoice resolve_error(const std::string& spec, const Sample& sample, std::vector<std::string>& warnings) {
  ErrorChoice c;
  c.spec = spec;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  if (kind == "none") {
    c.model = no_error();
  } else if (kind == "laplace" || kind == "gaussian") {
    if (colon == std::string::npos) throw ArgError("--error " + kind + " needs a sigma, e.g. " + kind + ":0.5");
    const double sigma = arg_double(spec.substr(colon + 1), "error sigma");
    if (sigma < 0) throw ArgError("error sigma must be >= 0");
    c.model = kind == "laplace" ? laplace_error(sigma) : gaussian_error(sigma);
  } else if (kind == "replicates") {
    const double s2 = estimate_sigma2_from_replicates(sample);
    c.model = laplace_error(std::sqrt(s2));
    warnings.push_back("error assumed Laplace with sigma_u estimated from replicates");
  } else if (kind == "dhm") {
    c.model = estimate_charfn_dhm(sample, *default_grid());
  } else {
    throw ArgError("unknown --error '" + spec + "' (laplace:<s>|gaussian:<s>|replicates|dhm|none)");
  }
  c.describe = {{"spec", spec}, {"family", to_string(c.model.family())}, {"sigma_u", c.model.sigma_u()}};
  return c;
}

std::vector<double> parse_grid(const std::string& spec, const Sample& sample) {
  if (spec.empty()) {
    const auto [lo, hi] = std::minmax_element(sample.w.begin(), sample.w.end());
    return linspace(*lo, *hi, 100);
  }
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw ArgError("--grid must be x_L:x_U:npts");
  const double lo = arg_double(parts[0], "grid start"), hi = arg_double(parts[1], "grid end");
  const double np = arg_double(parts[2], "grid size");
  if (!(hi > lo) || np < 2 || np != std::floor(np)) throw ArgError("--grid needs x_L < x_U and an integer npts >= 2");
  return linspace(lo, hi, static_cast<std::size_t>(np));
}

std::vector<double> parse_list(const std::string& spec, const std::string& what) {
  std::vector<double> v;
  for (const auto& p : split(spec, ',')) v.push_back(arg_double(p, what));
  if (v.empty()) throw ArgError("empty " + what + " list");
  return v;
}

std::uint64_t choose_seed(const std::optional<std::uint64_t>& seed, std::ostream& out) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  out << "seed: " << s << "\n";
  return s;
}

std::string sidecar_path(const std::string& out) {
  std::filesystem::path p(out);
  if (p.extension() == ".csv") return p.replace_extension(".json").string();
  return out + ".json";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgError("cannot write '" + path + "'");
  f << text;
}

std::shared_ptr<const FourierGrid> fft_grid(std::size_t G) {
  if (G == default_grid()->G) return default_grid();
  try {
    return std::make_shared<const FourierGrid>(FourierGrid::symmetric(G));
  } catch (const Error& e) {
    throw ArgError(std::string("--fft-size: ") + e.what());
  }
}

json bandwidth_json(const BandwidthSearchResult& r) {
  json c1 = json::array(), c2 = json::array();
  for (const auto& [h, v] : r.cv1_curve) c1.push_back({h, v});
  for (const auto& [h, v] : r.cv2_curve) c2.push_back({h, v});
  return {{"h_hat", r.h_hat},   {"h1", r.h1},       {"h2", r.h2},         {"h_tilde1", r.h_tilde1},
          {"h_tilde2", r.h_tilde2}, {"B", r.B},      {"L", r.L},           {"delta", r.delta},
          {"region1", {r.region1.first, r.region1.second}}, {"region2", {r.region2.first, r.region2.second}},
          {"pushed1", r.pushed1}, {"pushed2", r.pushed2}, {"cv1_curve", c1}, {"cv2_curve", c2}};
}

struct EstimateArgs {
  std::string data, method = "hz", error = "none", bandwidth = "cv-simex", grid, out;
  int p = 1;
  std::optional<std::uint64_t> seed;
  int B = 10, L = 10, delta = 5;
  std::size_t fft = 1u << 16;
};

void add_data_flags(CLI::App* c, EstimateArgs& a, bool with_bandwidth) {
  c->add_option("--data", a.data, "CSV with columns w,y[,w1,w2]")->required();
  c->add_option("--error", a.error, "laplace:<sigma> | gaussian:<sigma> | replicates | dhm | none");
  c->add_option("--p", a.p, "local polynomial order");
  if (with_bandwidth) c->add_option("--bandwidth", a.bandwidth, "<h> or cv-simex");
  c->add_option("--seed", a.seed, "RNG seed (entropy when omitted)");
  c->add_option("--B", a.B, "further-contamination replicates");
  c->add_option("--L", a.L, "candidate bandwidths per round");
  c->add_option("--delta", a.delta, "cross-validation folds");
  c->add_option("--fft-size", a.fft, "Fourier grid size G (power of two)");
}

CvSimexOptions cv_options(const EstimateArgs& a) {
  CvSimexOptions o;
  o.B = a.B;
  o.L = a.L;
  o.delta = a.delta;
  o.hz.grid = fft_grid(a.fft);
  if (a.B < 1 || a.L < 2 || a.delta < 2) throw ArgError("need --B >= 1, --L >= 2, --delta >= 2");
  return o;
}

json args_echo(const EstimateArgs& a, const std::string& command, std::uint64_t seed) {
  return {{"command", command}, {"data", a.data},   {"method", a.method}, {"error", a.error},
          {"p", a.p},           {"bandwidth", a.bandwidth}, {"grid", a.grid}, {"seed", seed},
          {"B", a.B},           {"L", a.L},         {"delta", a.delta},   {"fft_size", a.fft}};
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  if (a.method != "hz" && a.method != "dfc" && a.method != "naive") throw ArgError("--method must be hz, dfc or naive");
  if (a.p < 0 || a.p > 3) throw ArgError("--p must lie in [0, 3]");
  if (a.out.empty()) throw ArgError("--out is required");
  const Sample sample = read_sample_csv(a.data);
  std::vector<std::string> warnings;
  const auto err = resolve_error(a.error, sample, warnings);
  const auto grid = parse_grid(a.grid, sample);
  const auto& K = sinc_family_kernel();
  const auto cv = cv_options(a);

  json bw;
  double h = 0.0;
  std::uint64_t seed = 0;
  if (a.bandwidth == "cv-simex") {
    seed = choose_seed(a.seed, out);
    if (a.method == "naive") {
      BenchOptions bo;
      h = errorfree_cv_bandwidth(sample, K, a.p, oracle_bandwidths(sample.w, bo));
      bw = {{"mode", "leave-one-out"}, {"h", h}};
    } else {
      Rng rng = make_stream(seed, 0);
      const auto r = cv_simex_bandwidth(sample, K, err.model, a.p, a.method == "hz" ? EstimatorKind::HZ : EstimatorKind::DFC,
                                        rng, cv);
      h = r.h_hat;
      bw = bandwidth_json(r);
      bw["mode"] = "cv-simex";
      if (r.pushed1 || r.pushed2) warnings.push_back("bandwidth search region was pushed out at a boundary");
    }
  } else {
    h = arg_double(a.bandwidth, "bandwidth");
    if (!(h > 0)) throw ArgError("bandwidth must be positive");
    seed = a.seed.value_or(0);
    bw = {{"mode", "fixed"}, {"h", h}};
  }

  CurveEstimate est;
  if (a.method == "hz") {
    est = hz_estimate(sample, K, err.model, h, a.p, grid, cv.hz);
  } else if (a.method == "dfc") {
    est = dfc_estimate(sample, K, err.model, h, a.p, grid);
  } else {
    est = local_poly_fit(sample, K, h, a.p, grid);
  }
  if (const auto c = est.clamped_count()) warnings.push_back(std::to_string(c) + " grid points clamped");

  std::ostringstream csv;
  csv << "x,m_hat,clamped\n";
  for (std::size_t i = 0; i < est.x_grid.size(); ++i)
    csv << fmt17(est.x_grid[i]) << ',' << fmt17(est.values[i]) << ',' << (est.clamped[i] ? 1 : 0) << '\n';
  write_text(a.out, csv.str());
  json side = {{"schema_version", "1"},
               {"config", args_echo(a, "estimate", seed)},
               {"error_model", err.describe},
               {"bandwidth", bw},
               {"n", sample.size()},
               {"clamped_points", est.clamped_count()},
               {"warnings", warnings}};
  write_text(sidecar_path(a.out), side.dump(2) + "\n");
  out << "bandwidth: " << fmt17(h) << "\n";
  return 0;
}

int cmd_bandwidth(const EstimateArgs& a, std::ostream& out) {
  if (a.method != "hz" && a.method != "dfc") throw ArgError("--method must be hz or dfc");
  if (a.p < 0 || a.p > 3) throw ArgError("--p must lie in [0, 3]");
  const Sample sample = read_sample_csv(a.data);
  std::vector<std::string> warnings;
  const auto err = resolve_error(a.error, sample, warnings);
  const auto cv = cv_options(a);
  const std::uint64_t seed = choose_seed(a.seed, out);
  Rng rng = make_stream(seed, 0);
  const auto r = cv_simex_bandwidth(sample, sinc_family_kernel(), err.model, a.p,
                                    a.method == "hz" ? EstimatorKind::HZ : EstimatorKind::DFC, rng, cv);
  out << "h_hat: " << fmt17(r.h_hat) << "\n";
  out << "h1: " << fmt17(r.h1) << "\n";
  out << "h2: " << fmt17(r.h2) << "\n";
  if (!a.out.empty()) {
    std::ostringstream csv;
    csv << "round,h,cv\n";
    for (const auto& [h, v] : r.cv1_curve) csv << "1," << fmt17(h) << ',' << fmt17(v) << '\n';
    for (const auto& [h, v] : r.cv2_curve) csv << "2," << fmt17(h) << ',' << fmt17(v) << '\n';
    write_text(a.out, csv.str());
    if (r.pushed1 || r.pushed2) warnings.push_back("bandwidth search region was pushed out at a boundary");
    json side = {{"schema_version", "1"},
                 {"config", args_echo(a, "bandwidth", seed)},
                 {"error_model", err.describe},
                 {"bandwidth", bandwidth_json(r)},
                 {"warnings", warnings}};
    write_text(sidecar_path(a.out), side.dump(2) + "\n");
  }
  return 0;
}

void write_report(const BenchReport& r, const std::string& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  const auto base = (std::filesystem::path(dir) / stem).string();
  write_text(base + ".json", r.to_json().dump(2) + "\n");
  write_text(base + ".csv", r.to_tidy_csv());
}

std::string lambda_tag(double l) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", l);
  return buf;
}

void print_summary_header(std::ostream& out) { out << "label,method,median_ise,failures\n"; }

void print_summary(std::ostream& out, const BenchReport& r) {
  for (const auto& m : r.methods) {
    const auto fails = std::count_if(r.failures.begin(), r.failures.end(), [&](const Failure& f) { return f.method == m; });
    out << r.label << ',' << m << ',' << fmt17(r.median_ise(m)) << ',' << fails << "\n";
  }
}

struct SimulateArgs {
  std::string config, lambdas = "0.85", bandwidth = "oracle", out_dir = ".";
  std::size_t n = 500;
  int mc = 50, p = 1, B = 10, L = 10, delta = 5;
  std::optional<std::uint64_t> seed;
  bool misspecify = false, replicates = false, estimate_sigma = false;
  std::size_t fft = 1u << 16;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ConfigId id;
  try {
    id = parse_config_id(a.config);
  } catch (const Error& e) {
    throw ArgError(e.what());
  }
  if (a.bandwidth != "oracle" && a.bandwidth != "cv-simex") throw ArgError("--bandwidth must be oracle or cv-simex");
  const auto lambdas = parse_list(a.lambdas, "lambda");
  const std::uint64_t seed = choose_seed(a.seed, out);
  BenchOptions bo;
  EstimateArgs ea;
  ea.B = a.B;
  ea.L = a.L;
  ea.delta = a.delta;
  ea.fft = a.fft;
  bo.cv = cv_options(ea);
  bo.hz.grid = bo.cv.hz.grid;
  print_summary_header(out);
  for (double l : lambdas) {
    auto c = SimConfig::defaults(id);
    c.n = a.n;
    c.lambda = l;
    c.n_replicates_mc = a.mc;
    c.seed = seed;
    c.p = a.p;
    c.with_replicates = a.replicates || a.estimate_sigma;
    c.estimate_sigma = a.estimate_sigma;
    if (a.misspecify) {
      c.error_family_true = ErrorFamily::Gaussian;
      c.error_family_assumed = ErrorFamily::Laplace;
    }
    try {
      c.validate();
    } catch (const Error& e) {
      throw ArgError(e.what());
    }
    const auto mode = a.bandwidth == "oracle" ? BandwidthMode::Oracle : BandwidthMode::CVSimex;
    auto r = run_benchmark(c, mode, bo);
    r.config["fft_size"] = a.fft;
    write_report(r, a.out_dir, std::string(to_string(id)) + "_lambda" + lambda_tag(l));
    print_summary(out, r);
    out << "# runtime " << std::fixed << std::setprecision(1) << r.runtime_sec << "s\n" << std::defaultfloat;
  }
  return 0;
}

struct MotorArgs {
  std::string data, lambdas = "0.95", bandwidth = "oracle", out_dir = ".";
  int mc = 20, B = 10, L = 10, delta = 5;
  std::optional<std::uint64_t> seed;
};

int cmd_motorcycle(const MotorArgs& a, std::ostream& out) {
  if (a.bandwidth != "oracle" && a.bandwidth != "cv-simex") throw ArgError("--bandwidth must be oracle or cv-simex");
  const auto lambdas = parse_list(a.lambdas, "lambda");
  for (double l : lambdas)
    if (!(l > 0 && l < 1)) throw ArgError("lambda must lie in (0, 1)");
  if (a.mc < 1) throw ArgError("--mc must be >= 1");
  const Sample data = read_xy_csv(a.data);
  const std::uint64_t seed = choose_seed(a.seed, out);
  MotorcycleOptions mo;
  mo.mode = a.bandwidth == "oracle" ? BandwidthMode::Oracle : BandwidthMode::CVSimex;
  EstimateArgs ea;
  ea.B = a.B;
  ea.L = a.L;
  ea.delta = a.delta;
  mo.bench.cv = cv_options(ea);
  const auto reports = motorcycle_experiment(data, lambdas, a.mc, seed, mo);
  print_summary_header(out);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    write_report(reports[i], a.out_dir, "motorcycle_lambda" + lambda_tag(lambdas[i]));
    print_summary(out, reports[i]);
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Errors-in-variables local polynomial regression (HZ and DFC estimators)", "errinvar"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "estimate a regression curve from data");
  add_data_flags(c_est, est, true);
  c_est->add_option("--method", est.method, "hz | dfc | naive");
  c_est->add_option("--grid", est.grid, "x_L:x_U:npts (default: 100 points over the data range)");
  c_est->add_option("--out", est.out, "output CSV path")->required();

  EstimateArgs bw;
  auto* c_bw = app.add_subcommand("bandwidth", "CV-SIMEX bandwidth selection");
  add_data_flags(c_bw, bw, false);
  c_bw->add_option("--method", bw.method, "hz | dfc");
  c_bw->add_option("--out", bw.out, "CSV path for both CV curves");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo benchmark on configurations c1..c4");
  c_sim->add_option("--config", sim.config, "c1 | c2 | c3 | c4")->required();
  c_sim->add_option("--lambda", sim.lambdas, "comma-separated reliability ratios");
  c_sim->add_option("--n", sim.n, "sample size");
  c_sim->add_option("--mc", sim.mc, "Monte-Carlo replicates");
  c_sim->add_option("--seed", sim.seed, "RNG seed (entropy when omitted)");
  c_sim->add_option("--p", sim.p, "local polynomial order");
  c_sim->add_option("--bandwidth", sim.bandwidth, "oracle | cv-simex");
  c_sim->add_flag("--misspecify-laplace", sim.misspecify, "simulate Gaussian error, estimate assuming Laplace");
  c_sim->add_flag("--replicates", sim.replicates, "simulate two replicate measurements per subject");
  c_sim->add_flag("--estimate-sigma", sim.estimate_sigma, "estimate sigma_u from replicates");
  c_sim->add_option("--B", sim.B, "further-contamination replicates");
  c_sim->add_option("--L", sim.L, "candidate bandwidths per round");
  c_sim->add_option("--delta", sim.delta, "cross-validation folds");
  c_sim->add_option("--fft-size", sim.fft, "Fourier grid size G");
  c_sim->add_option("--out-dir", sim.out_dir, "directory for report files");

  MotorArgs mot;
  auto* c_mot = app.add_subcommand("motorcycle", "contamination experiment on the motorcycle data");
  c_mot->add_option("--data", mot.data, "two-column CSV (time in ms, acceleration in g)")->required();
  c_mot->add_option("--lambda", mot.lambdas, "comma-separated reliability ratios");
  c_mot->add_option("--mc", mot.mc, "Monte-Carlo replicates per lambda");
  c_mot->add_option("--seed", mot.seed, "RNG seed (entropy when omitted)");
  c_mot->add_option("--bandwidth", mot.bandwidth, "oracle | cv-simex");
  c_mot->add_option("--B", mot.B, "further-contamination replicates");
  c_mot->add_option("--L", mot.L, "candidate bandwidths per round");
  c_mot->add_option("--delta", mot.delta, "cross-validation folds");
  c_mot->add_option("--out-dir", mot.out_dir, "directory for report files");

  std::vector<std::string> argv_store{"errinvar"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 2;
  }

  try {
    if (c_est->parsed()) return cmd_estimate(est, out);
    if (c_bw->parsed()) return cmd_bandwidth(bw, out);
    if (c_sim->parsed()) return cmd_simulate(sim, out);
    if (c_mot->parsed()) return cmd_motorcycle(mot, out);
  } catch (const ArgError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_data_error(e.code()) ? 3 : 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}

}  // namespace errinvar
