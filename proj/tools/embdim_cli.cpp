// Command-line front end: closed-form bounds, covering/width/projection
// experiments on sampled model manifolds, sparse RIP experiments, and the
// self-check suite. Reports are emitted as CSV or JSON; identical flags and
// seed produce byte-identical output.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "embdim/embdim.hpp"

namespace {

using embdim::BoundConstants;
using embdim::ManifoldDescriptor;
using embdim::ModelFamily;
using embdim::ModelKind;
using embdim::PointCloud;

// ---------------------------------------------------------------------------
// Report rows: ordered key/value pairs rendered to CSV or JSON.

struct Null {};
using Value = std::variant<Null, double, long long, bool, std::string>;
using Row = std::vector<std::pair<std::string, Value>>;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string render_csv(const std::vector<Row>& rows) {
  std::string out;
  for (std::size_t i = 0; i < rows.front().size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(rows.front()[i].first);
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      const auto& value = row[i].second;
      if (std::holds_alternative<Null>(value)) {
        // empty field
      } else if (const auto* d = std::get_if<double>(&value)) {
        out += format_double(*d);
      } else if (const auto* n = std::get_if<long long>(&value)) {
        out += std::to_string(*n);
      } else if (const auto* b = std::get_if<bool>(&value)) {
        out += *b ? "true" : "false";
      } else {
        out += csv_escape(std::get<std::string>(value));
      }
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const std::vector<Row>& rows) {
  auto to_json = [](const Row& row) {
    nlohmann::json obj;
    for (const auto& [key, value] : row) {
      if (std::holds_alternative<Null>(value)) {
        obj[key] = nullptr;
      } else if (const auto* d = std::get_if<double>(&value)) {
        if (std::isfinite(*d)) {
          obj[key] = *d;
        } else {
          obj[key] = format_double(*d);  // "inf"/"-inf"/"nan" as strings
        }
      } else if (const auto* n = std::get_if<long long>(&value)) {
        obj[key] = *n;
      } else if (const auto* b = std::get_if<bool>(&value)) {
        obj[key] = *b;
      } else {
        obj[key] = std::get<std::string>(value);
      }
    }
    return obj;
  };
  nlohmann::json doc;
  if (rows.size() == 1) {
    doc = to_json(rows.front());
  } else {
    doc = nlohmann::json::array();
    for (const auto& row : rows) doc.push_back(to_json(row));
  }
  return doc.dump(2) + "\n";
}

struct OutputOptions {
  std::string format = "csv";
  std::string out_path;
};

void add_common_options(CLI::App* cmd, OutputOptions& out, long long& seed, std::string& config) {
  cmd->add_option("--seed", seed, "Random seed (default 0)");
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", out.out_path, "Write the report to PATH instead of stdout");
  cmd->add_option("--config", config,
                  "Line-oriented key=value config file; flags take precedence");
}

// Applies a key=value config file by injecting "--key value" for every key not
// already present on the command line, so explicit flags always win.
void apply_config_file(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file " + path);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config file: expected key=value, got '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& arg : args) {
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
        present = true;
        break;
      }
    }
    if (!present) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
}

void emit(const std::vector<Row>& rows, const OutputOptions& opts) {
  const std::string text = opts.format == "json" ? render_json(rows) : render_csv(rows);
  if (opts.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(opts.out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + opts.out_path);
    os << text;
  }
}

// ---------------------------------------------------------------------------
// Shared flag groups.

struct FamilyOptions {
  std::string family;
  int dim = 1;
  double radius = 1.0;

  void attach(CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--family", family, "Model family")
                    ->check(CLI::IsMember({"sphere", "ball", "torus"}));
    if (required) opt->required();
    cmd->add_option("--dim", dim, "Intrinsic dimension (circle factors for torus)");
    cmd->add_option("--radius", radius, "Radius parameter");
  }

  ModelFamily build() const {
    ModelKind kind = ModelKind::Sphere;
    if (family == "ball") kind = ModelKind::Ball;
    else if (family == "torus") kind = ModelKind::FlatTorus;
    ModelFamily f{kind, dim, radius};
    f.validate();
    return f;
  }
};

struct ConstantsOptions {
  double sudakov_c = 0.25;
  double ball_width_c = 1.0;
  double override_c1 = 0.0;
  double override_c2 = 0.0;
  bool has_c1 = false;
  bool has_c2 = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--sudakov-c", sudakov_c, "Sudakov minoration constant (default 0.25)");
    cmd->add_option("--ball-width-c", ball_width_c, "Gaussian ball-width constant (default 1.0)");
    cmd->add_option("--override-c1", override_c1, "Evaluate the high-reach closed form with C1")
        ->trigger_on_parse()
        ->each([this](const std::string&) { has_c1 = true; });
    cmd->add_option("--override-c2", override_c2, "Evaluate the low-reach closed form with C2")
        ->trigger_on_parse()
        ->each([this](const std::string&) { has_c2 = true; });
  }

  BoundConstants build() const {
    BoundConstants k;
    k.sudakov_c = sudakov_c;
    k.ball_width_c = ball_width_c;
    if (has_c1) k.override_c1 = override_c1;
    if (has_c2) k.override_c2 = override_c2;
    k.validate();
    return k;
  }

  void describe(Row& row) const {
    row.emplace_back("sudakov_c", sudakov_c);
    row.emplace_back("ball_width_c", ball_width_c);
    row.emplace_back("override_c1", has_c1 ? Value{override_c1} : Value{Null{}});
    row.emplace_back("override_c2", has_c2 ? Value{override_c2} : Value{Null{}});
  }
};

double parse_reach(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw std::invalid_argument("cannot parse reach value '" + text + "'");
  return v;  // strtod accepts "inf"
}

// ---------------------------------------------------------------------------
// bounds

int cmd_bounds(const FamilyOptions& fam, bool has_family, const std::string& tau_text,
               const ManifoldDescriptor& explicit_desc, double epsilon, double rho,
               const ConstantsOptions& constants, const OutputOptions& out) {
  ManifoldDescriptor m;
  if (has_family) {
    m = embdim::descriptor(fam.build());
  } else {
    m = explicit_desc;
    m.reach = parse_reach(tau_text);
  }
  m.validate();
  const BoundConstants k = constants.build();

  const auto regime = embdim::reach_regime(m);
  const double threshold = embdim::reach_regime_threshold(m);
  const auto lb = embdim::manifold_lower_bound(m, epsilon, k);
  // Compositional value alongside any closed-form override.
  const auto lb_composed = embdim::manifold_lower_bound(m, epsilon, {k.sudakov_c, k.ball_width_c});

  Row row;
  row.emplace_back("d", static_cast<long long>(m.intrinsic_dim));
  row.emplace_back("volume", m.volume);
  row.emplace_back("tau", m.reach);
  row.emplace_back("diam", m.diameter);
  row.emplace_back("epsilon", epsilon);
  row.emplace_back("rho", rho);
  row.emplace_back("regime", std::string(embdim::to_string(regime)));
  row.emplace_back("regime_threshold", threshold);
  // log(V / tau^d) - log(omega_d (4 sqrt(e))^d): nonnegative exactly in the
  // low-reach regime.
  const double low_reach_gap =
      m.has_finite_reach()
          ? std::log(m.volume) - m.intrinsic_dim * std::log(m.reach) -
                (embdim::log_unit_ball_volume(m.intrinsic_dim) +
                 m.intrinsic_dim * (std::log(4.0) + 0.5))
          : -std::numeric_limits<double>::infinity();
  row.emplace_back("low_reach_log_gap", low_reach_gap);
  row.emplace_back("m_lower", lb_composed.m_lb);
  row.emplace_back("m_lower_vacuous", lb_composed.vacuous);
  row.emplace_back("m_lower_closed", lb.closed_form ? Value{lb.m_lb} : Value{Null{}});
  row.emplace_back("delta_used", lb_composed.delta_used);
  row.emplace_back("log_covering", lb_composed.log_covering);

  if (m.has_finite_reach()) {
    const auto ub = embdim::random_projection_upper_bound(m, epsilon, rho);
    row.emplace_back("m_upper", ub.m_ub);
    row.emplace_back("m_upper_applicable", true);
    row.emplace_back("assumption_ok", ub.assumption_ok);
  } else {
    row.emplace_back("m_upper", Null{});
    row.emplace_back("m_upper_applicable", false);
    row.emplace_back("assumption_ok", Null{});
  }
  constants.describe(row);
  emit({row}, out);
  return 0;
}

// ---------------------------------------------------------------------------
// cover

int cmd_cover(const FamilyOptions& fam, long long count, double delta, long long seed,
              const OutputOptions& out) {
  const ModelFamily family = fam.build();
  const PointCloud cloud =
      embdim::sample(family, static_cast<std::size_t>(count), static_cast<std::uint64_t>(seed));
  const ManifoldDescriptor truth = *cloud.truth;

  const auto bound = embdim::covering_lower_bound(truth, delta);
  const auto net = embdim::greedy_net(cloud, delta);
  const auto packing = embdim::packing_count(cloud, 2.0 * delta);
  const bool sound = bound.tight_bound <= static_cast<double>(net.center_indices.size());

  Row row;
  row.emplace_back("family", fam.family);
  row.emplace_back("dim", static_cast<long long>(fam.dim));
  row.emplace_back("radius", fam.radius);
  row.emplace_back("count", count);
  row.emplace_back("seed", seed);
  row.emplace_back("delta", delta);
  row.emplace_back("net_size", static_cast<long long>(net.center_indices.size()));
  row.emplace_back("packing_count_2delta", static_cast<long long>(packing));
  row.emplace_back("tight_bound", bound.tight_bound);
  row.emplace_back("simple_bound", bound.simple_bound);
  row.emplace_back("geodesic_radius", bound.geodesic_radius);
  row.emplace_back("sound", sound);
  emit({row}, out);
  return sound ? 0 : 1;
}

// ---------------------------------------------------------------------------
// width

int cmd_width(const FamilyOptions& fam, bool has_family, const std::string& csv_path,
              long long trials, double epsilon, long long seed, const ConstantsOptions& constants,
              const OutputOptions& out) {
  const BoundConstants k = constants.build();
  Row row;
  embdim::WidthEstimate estimate;
  double diam = 0.0;

  if (has_family) {
    const ModelFamily family = fam.build();
    estimate = embdim::gaussian_width_mc_exact(family, trials, static_cast<std::uint64_t>(seed));
    diam = embdim::descriptor(family).diameter;
    row.emplace_back("source", fam.family);
    row.emplace_back("dim", static_cast<long long>(fam.dim));
    row.emplace_back("radius", fam.radius);
    row.emplace_back("sup_mode", std::string("exact"));
    row.emplace_back("width_closed_form", embdim::width_closed_form(family));
  } else {
    const PointCloud cloud = PointCloud::load_csv(csv_path);
    estimate = embdim::gaussian_width_mc(cloud, trials, static_cast<std::uint64_t>(seed));
    diam = cloud.size() >= 2 ? embdim::diameter(cloud) : 0.0;
    row.emplace_back("source", csv_path);
    row.emplace_back("dim", static_cast<long long>(cloud.ambient_dim()));
    row.emplace_back("radius", Null{});
    row.emplace_back("sup_mode", std::string("sample"));
    row.emplace_back("width_closed_form", Null{});
  }

  row.emplace_back("trials", trials);
  row.emplace_back("seed", seed);
  row.emplace_back("width_mean", estimate.mean);
  row.emplace_back("width_std_error", estimate.std_error);
  row.emplace_back("epsilon", epsilon);
  row.emplace_back("diam", diam > 0.0 ? Value{diam} : Value{Null{}});
  const bool can_bound = diam > 0.0 && estimate.mean > 0.0;
  row.emplace_back("m_lb_width",
                   can_bound ? Value{embdim::embedding_lb_from_width(
                                   embdim::DistortionBudget::symmetric(epsilon), diam,
                                   estimate.mean, k)}
                             : Value{Null{}});
  constants.describe(row);
  emit({row}, out);
  return 0;
}

// ---------------------------------------------------------------------------
// embed-search

int cmd_embed_search(const FamilyOptions& fam, int ambient, long long count, double epsilon,
                     double rho, int trials, double success_fraction, long long seed,
                     const ConstantsOptions& constants, const OutputOptions& out) {
  const ModelFamily family = fam.build();
  const BoundConstants k = constants.build();
  const auto root = embdim::KeyedRng(static_cast<std::uint64_t>(seed));

  PointCloud cloud =
      embdim::sample(family, static_cast<std::size_t>(count), root.derive(1).next_u64());
  if (ambient < cloud.ambient_dim())
    throw std::invalid_argument("embed-search: --ambient must be >= the family's ambient dimension");
  cloud = embdim::embed_isometric(cloud, ambient, root.derive(2).next_u64());
  const ManifoldDescriptor truth = *cloud.truth;

  const auto lb = embdim::manifold_lower_bound(truth, epsilon, k);
  const int m_emp = embdim::minimal_embedding_dim_search(cloud, epsilon, trials, success_fraction,
                                                         root.derive(3).next_u64());

  Row row;
  row.emplace_back("family", fam.family);
  row.emplace_back("dim", static_cast<long long>(fam.dim));
  row.emplace_back("radius", fam.radius);
  row.emplace_back("ambient_n", static_cast<long long>(ambient));
  row.emplace_back("count", count);
  row.emplace_back("epsilon", epsilon);
  row.emplace_back("rho", rho);
  row.emplace_back("trials", static_cast<long long>(trials));
  row.emplace_back("success_fraction", success_fraction);
  row.emplace_back("seed", seed);
  row.emplace_back("regime", std::string(embdim::to_string(lb.regime)));
  row.emplace_back("m_lower", lb.m_lb);
  row.emplace_back("m_lower_vacuous", lb.vacuous);
  row.emplace_back("m_empirical", static_cast<long long>(m_emp));
  row.emplace_back("sentinel", m_emp > ambient);

  bool sandwich_ok = lb.vacuous || lb.m_lb <= static_cast<double>(m_emp);
  if (truth.has_finite_reach() && epsilon <= 1.0 / 3.0) {
    const auto ub = embdim::random_projection_upper_bound(truth, epsilon, rho);
    row.emplace_back("m_upper", ub.m_ub);
    row.emplace_back("m_upper_applicable", true);
    row.emplace_back("assumption_ok", ub.assumption_ok);
    sandwich_ok = sandwich_ok && static_cast<double>(m_emp) <= ub.m_ub;
  } else {
    row.emplace_back("m_upper", Null{});
    row.emplace_back("m_upper_applicable", false);
    row.emplace_back("assumption_ok", Null{});
  }
  row.emplace_back("sandwich_ok", sandwich_ok);
  constants.describe(row);
  emit({row}, out);
  return sandwich_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// rip

int cmd_rip(int n, int s, std::vector<int> m_grid, int trials, double epsilon, int target_n,
            long long max_attempts, const std::string& save_family_path, long long seed,
            const ConstantsOptions& constants, const OutputOptions& out) {
  const BoundConstants k = constants.build();
  if (target_n <= 0) {
    target_n = static_cast<int>(std::ceil(
        std::pow(static_cast<double>(n) / (2.0 * s), 0.25 * static_cast<double>(s))));
    target_n = std::max(target_n, 2);  // distortion needs at least one pair
  }
  if (max_attempts <= 0) max_attempts = 10000LL * target_n;

  const auto root = embdim::KeyedRng(static_cast<std::uint64_t>(seed));
  const auto family = embdim::build_subset_family(n, s, target_n, max_attempts,
                                                  root.derive(1).next_u64());
  if (!save_family_path.empty()) family.save(save_family_path);
  const auto vectors = embdim::family_to_vectors(family);
  const auto lb = embdim::rip_lower_bound(n, s, epsilon, k);

  if (m_grid.empty()) m_grid = {8, 16, 32, 64};
  std::vector<Row> rows;
  for (const int m : m_grid) {
    const auto reports =
        embdim::rip_experiment(vectors, m, trials, root.derive(2).derive(m).next_u64());
    std::vector<double> eps_hats;
    eps_hats.reserve(reports.size());
    int within = 0;
    for (const auto& trial : reports) {
      eps_hats.push_back(trial.eps_hat);
      if (trial.eps_hat <= epsilon) ++within;
    }
    std::sort(eps_hats.begin(), eps_hats.end());
    const double median = eps_hats[eps_hats.size() / 2];

    Row row;
    row.emplace_back("n", static_cast<long long>(n));
    row.emplace_back("s", static_cast<long long>(s));
    row.emplace_back("family_size", static_cast<long long>(family.subsets.size()));
    row.emplace_back("target_family_size", static_cast<long long>(target_n));
    row.emplace_back("m", static_cast<long long>(m));
    row.emplace_back("trials", static_cast<long long>(trials));
    row.emplace_back("epsilon", epsilon);
    row.emplace_back("seed", seed);
    row.emplace_back("median_eps_hat", median);
    row.emplace_back("frac_within_eps",
                     static_cast<double>(within) / static_cast<double>(trials));
    row.emplace_back("m_lower", lb.m_lb);
    row.emplace_back("m_lower_vacuous", lb.vacuous);
    constants.describe(row);
    rows.push_back(std::move(row));
  }
  emit(rows, out);
  return 0;
}

// ---------------------------------------------------------------------------
// validate

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> run_validation_suite(std::uint64_t seed, double sudakov_c) {
  std::vector<CheckResult> results;
  const double pi = std::numbers::pi;

  {  // omega_d recurrence, d <= 300
    double worst = 0.0;
    for (int d = 3; d <= 300; ++d) {
      const double expected = embdim::unit_ball_volume(d - 2) * 2.0 * pi / d;
      worst = std::max(worst,
                       std::abs(embdim::unit_ball_volume(d) - expected) / expected);
    }
    results.push_back({"omega_recurrence", worst <= 1e-10,
                       "max_rel_err=" + format_double(worst)});
  }

  {  // covering bounds vs the exact circle covering number
    const ManifoldDescriptor circle{1, 2.0 * pi, 1.0, 2.0, {}};
    bool ok = true;
    for (double delta : {0.1, 0.25, 0.5}) {
      const auto bound = embdim::covering_lower_bound(circle, delta);
      const double exact = std::ceil(pi / (2.0 * std::asin(0.5 * delta)));
      ok = ok && bound.simple_bound <= bound.tight_bound && bound.tight_bound <= exact;
    }
    results.push_back({"covering_bound_circle", ok, "delta grid {0.1,0.25,0.5}"});
  }

  {  // chord/geodesic inequalities against exact circle trigonometry
    bool ok = true;
    for (double tau : {0.5, 1.0, 2.0}) {
      for (int i = 1; i <= 1000; ++i) {
        const double l = pi * tau * i / 1001.0;
        const double chord = 2.0 * tau * std::sin(l / (2.0 * tau));
        if (embdim::chord_lower_from_geodesic(l, tau) > chord + 1e-9) ok = false;
        if (chord <= 0.5 * tau &&
            l > embdim::geodesic_upper_from_chord(chord, tau) + 1e-9) {
          ok = false;
        }
      }
    }
    results.push_back({"chord_geodesic_circle", ok, "tau in {0.5,1,2}, 1000 lengths"});
  }

  {  // hyperbolic volume comparison chain
    bool ok = true;
    for (int d : {1, 2, 3, 5}) {
      for (double ratio : {0.01, 0.1, 0.5}) {
        const double v = embdim::hyperbolic_ball_volume(d, 1.0, ratio);
        const double lower = embdim::unit_ball_volume(d) * std::pow(ratio, d);
        const double upper =
            lower * std::pow(1.0 + 2.0 * std::numbers::sqrt2 * ratio, d - 1);
        ok = ok && v >= lower * (1.0 - 1e-9) && v <= upper * (1.0 + 1e-9);
      }
    }
    results.push_back({"hyperbolic_volume_chain", ok, "d in {1,2,3,5}, r/tau in {0.01,0.1,0.5}"});
  }

  {  // hyperbolic volume flat limit
    bool ok = true;
    for (int d : {2, 3, 7}) {
      const double tau = std::numbers::sqrt2 / 1e-3;
      const double v = embdim::hyperbolic_ball_volume(d, tau, 1.0);
      ok = ok && std::abs(v - embdim::unit_ball_volume(d)) <= 1e-3 * embdim::unit_ball_volume(d);
    }
    results.push_back({"hyperbolic_flat_limit", ok, "sqrt(2) r/tau = 1e-3, 0.1% tolerance"});
  }

  {  // Gaussian-width sandwich under a [0.5, 2] singular-value map
    const int dim = 8;
    const auto rng = embdim::KeyedRng(seed);
    const auto cloud = embdim::sample({ModelKind::Ball, dim, 1.0}, 100, rng.derive(1).next_u64());
    auto rotated = embdim::embed_isometric(cloud, dim, rng.derive(2).next_u64());
    std::vector<double> scaled(rotated.flat());
    for (std::size_t i = 0; i < rotated.size(); ++i) {
      for (int j = 0; j < dim; ++j) {
        scaled[i * dim + j] *= 0.5 + 1.5 * j / (dim - 1.0);
      }
    }
    const auto mapped = embdim::embed_isometric(PointCloud(dim, std::move(scaled)), dim,
                                                rng.derive(3).next_u64());
    const auto w_src = embdim::gaussian_width_mc(cloud, 4000, rng.derive(4).next_u64());
    const auto w_img = embdim::gaussian_width_mc(mapped, 4000, rng.derive(5).next_u64());
    const double sig_lo =
        std::sqrt(0.25 * w_src.std_error * w_src.std_error + w_img.std_error * w_img.std_error);
    const double sig_hi =
        std::sqrt(4.0 * w_src.std_error * w_src.std_error + w_img.std_error * w_img.std_error);
    const bool ok = 0.5 * w_src.mean - 3.0 * sig_lo <= w_img.mean &&
                    w_img.mean <= 2.0 * w_src.mean + 3.0 * sig_hi;
    results.push_back({"width_sandwich", ok,
                       "w_src=" + format_double(w_src.mean) +
                           " w_img=" + format_double(w_img.mean)});
  }

  {  // Sudakov minoration consistency at the configured constant
    const auto rng = embdim::KeyedRng(seed);
    std::vector<PointCloud> clouds;
    clouds.emplace_back(1, std::vector<double>{0.0, 2.0});
    clouds.push_back(embdim::sample({ModelKind::Sphere, 1, 1.0}, 500, rng.derive(6).next_u64()));
    clouds.push_back(embdim::sample({ModelKind::Ball, 4, 1.0}, 400, rng.derive(7).next_u64()));
    bool ok = true;
    std::string detail;
    for (std::size_t c = 0; c < clouds.size(); ++c) {
      const auto width = embdim::gaussian_width_mc(clouds[c], 20000, rng.derive(8 + c).next_u64());
      for (double delta : {0.1, 0.25, 0.5, 1.0}) {
        const double log_n = std::log(
            static_cast<double>(embdim::packing_count(clouds[c], 2.0 * delta)));
        const double minoration = sudakov_c * delta * std::sqrt(log_n);
        if (minoration > width.mean + 3.0 * width.std_error) {
          ok = false;
          detail = "violated at cloud " + std::to_string(c) +
                   " delta=" + format_double(delta);
        }
      }
    }
    if (detail.empty()) detail = "sudakov_c=" + format_double(sudakov_c);
    results.push_back({"sudakov_consistency", ok, detail});
  }

  {  // scale invariance of the manifold lower bound, both regimes
    const ManifoldDescriptor high{1, 2.0 * pi, 1.0, 2.0, {}};
    const ManifoldDescriptor low{2, 100.0, 0.1, 3.0, {}};
    bool ok = true;
    for (const auto& base : {high, low}) {
      const double reference = embdim::manifold_lower_bound(base, 1.0 / 3.0).m_lb;
      for (double lambda : {0.1, 1.0, 10.0}) {
        const double scaled =
            embdim::manifold_lower_bound(base.rescaled(lambda), 1.0 / 3.0).m_lb;
        if (std::abs(scaled - reference) > 1e-9 * reference) ok = false;
      }
    }
    results.push_back({"scale_invariance", ok, "lambda in {0.1,1,10}, both regimes"});
  }

  return results;
}

int cmd_validate(long long seed, bool corrupt, const OutputOptions& out) {
  const double sudakov_c = corrupt ? 10.0 : 0.25;
  const auto results = run_validation_suite(static_cast<std::uint64_t>(seed), sudakov_c);
  std::vector<Row> rows;
  bool all_pass = true;
  for (const auto& result : results) {
    all_pass = all_pass && result.pass;
    Row row;
    row.emplace_back("check", result.name);
    row.emplace_back("pass", result.pass);
    row.emplace_back("detail", result.detail);
    rows.push_back(std::move(row));
  }
  emit(rows, out);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds and desk-scale experiments for low-distortion Euclidean embedding dimension"};
  app.require_subcommand(1);

  // -- bounds ---------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "Evaluate the lower/upper dimension bounds");
  FamilyOptions bounds_family;
  bounds_family.attach(bounds, false);
  ManifoldDescriptor bounds_desc;
  std::string bounds_tau = "inf";
  bounds->add_option("--d", bounds_desc.intrinsic_dim, "Intrinsic dimension (explicit descriptor)");
  bounds->add_option("--volume", bounds_desc.volume, "d-dimensional volume");
  bounds->add_option("--tau", bounds_tau, "Reach (number or 'inf')");
  bounds->add_option("--diam", bounds_desc.diameter, "Extrinsic diameter");
  double bounds_eps = 0.0, bounds_rho = 1.0 / 3.0;
  bounds->add_option("--epsilon", bounds_eps, "Distortion budget in (0,1)")->required();
  bounds->add_option("--rho", bounds_rho, "Failure probability for the upper bound");
  ConstantsOptions bounds_constants;
  bounds_constants.attach(bounds);
  OutputOptions bounds_out;
  long long bounds_seed = 0;
  std::string bounds_config;
  add_common_options(bounds, bounds_out, bounds_seed, bounds_config);

  // -- cover ----------------------------------------------------------------
  auto* cover = app.add_subcommand("cover", "Covering experiment on a sampled family");
  FamilyOptions cover_family;
  cover_family.attach(cover, true);
  long long cover_count = 2000;
  double cover_delta = 0.0;
  cover->add_option("--count", cover_count, "Sample size")->check(CLI::PositiveNumber);
  cover->add_option("--delta", cover_delta, "Covering radius")->required();
  OutputOptions cover_out;
  long long cover_seed = 0;
  std::string cover_config;
  add_common_options(cover, cover_out, cover_seed, cover_config);

  // -- width ----------------------------------------------------------------
  auto* width = app.add_subcommand("width", "Monte Carlo Gaussian width");
  FamilyOptions width_family;
  width_family.attach(width, false);
  std::string width_csv;
  width->add_option("--csv", width_csv, "Estimate the width of a point cloud CSV file");
  long long width_trials = 10000;
  double width_eps = 0.5;
  width->add_option("--trials", width_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  width->add_option("--epsilon", width_eps, "Budget for the width-route lower bound");
  ConstantsOptions width_constants;
  width_constants.attach(width);
  OutputOptions width_out;
  long long width_seed = 0;
  std::string width_config;
  add_common_options(width, width_out, width_seed, width_config);

  // -- embed-search ---------------------------------------------------------
  auto* search = app.add_subcommand("embed-search",
                                    "Empirical minimal projection dimension vs the bounds");
  FamilyOptions search_family;
  search_family.attach(search, true);
  int search_ambient = 50;
  long long search_count = 2000;
  double search_eps = 0.0, search_rho = 1.0 / 3.0, search_fraction = 0.5;
  int search_trials = 5;
  search->add_option("--ambient", search_ambient, "Ambient dimension to embed into");
  search->add_option("--count", search_count, "Sample size")->check(CLI::PositiveNumber);
  search->add_option("--epsilon", search_eps, "Distortion budget in (0,1)")->required();
  search->add_option("--rho", search_rho, "Failure probability for the upper bound");
  search->add_option("--trials", search_trials, "Projection trials per candidate m");
  search->add_option("--success-fraction", search_fraction, "Fraction of trials that must succeed");
  ConstantsOptions search_constants;
  search_constants.attach(search);
  OutputOptions search_out;
  long long search_seed = 0;
  std::string search_config;
  add_common_options(search, search_out, search_seed, search_config);

  // -- rip ------------------------------------------------------------------
  auto* rip = app.add_subcommand("rip", "Sparse-vector distortion experiment");
  int rip_n = 64, rip_s = 8, rip_trials = 50, rip_target = 0;
  long long rip_attempts = 0;
  double rip_eps = 0.5;
  std::vector<int> rip_grid;
  std::string rip_save_family;
  rip->add_option("--n", rip_n, "Ambient dimension")->required();
  rip->add_option("--s", rip_s, "Sparsity (even)")->required();
  rip->add_option("--m-grid", rip_grid, "Projection dimensions")->delimiter(',');
  rip->add_option("--trials", rip_trials, "Trials per m")->check(CLI::PositiveNumber);
  rip->add_option("--epsilon", rip_eps, "RIP distortion target");
  rip->add_option("--target-n", rip_target, "Family size target (default (n/2s)^{s/4})");
  rip->add_option("--max-attempts", rip_attempts, "Greedy attempt budget (default 1e4 * target)");
  rip->add_option("--save-family", rip_save_family, "Write the subset family to PATH");
  ConstantsOptions rip_constants;
  rip_constants.attach(rip);
  OutputOptions rip_out;
  long long rip_seed = 0;
  std::string rip_config;
  add_common_options(rip, rip_out, rip_seed, rip_config);

  // -- validate ---------------------------------------------------------------
  auto* validate = app.add_subcommand("validate", "Run the internal consistency suite");
  OutputOptions validate_out;
  long long validate_seed = 0;
  bool validate_corrupt = false;
  std::string validate_config;
  add_common_options(validate, validate_out, validate_seed, validate_config);
  validate->add_flag("--self-test-corrupt", validate_corrupt)->group("");  // negative control

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    apply_config_file(args);
    std::reverse(args.begin(), args.end());  // CLI11's vector overload pops from the back
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (bounds->parsed()) {
      const bool has_family = bounds->count("--family") > 0;
      if (!has_family && (bounds->count("--d") == 0 || bounds->count("--volume") == 0 ||
                          bounds->count("--diam") == 0)) {
        throw std::invalid_argument(
            "bounds: provide --family or an explicit descriptor (--d, --volume, --tau, --diam)");
      }
      return cmd_bounds(bounds_family, has_family, bounds_tau, bounds_desc, bounds_eps,
                        bounds_rho, bounds_constants, bounds_out);
    }
    if (cover->parsed()) {
      return cmd_cover(cover_family, cover_count, cover_delta, cover_seed, cover_out);
    }
    if (width->parsed()) {
      const bool has_family = width->count("--family") > 0;
      if (!has_family && width_csv.empty())
        throw std::invalid_argument("width: provide either --family or --csv");
      return cmd_width(width_family, has_family, width_csv, width_trials, width_eps, width_seed,
                       width_constants, width_out);
    }
    if (search->parsed()) {
      return cmd_embed_search(search_family, search_ambient, search_count, search_eps, search_rho,
                              search_trials, search_fraction, search_seed, search_constants,
                              search_out);
    }
    if (rip->parsed()) {
      return cmd_rip(rip_n, rip_s, rip_grid, rip_trials, rip_eps, rip_target, rip_attempts,
                     rip_save_family, rip_seed, rip_constants, rip_out);
    }
    if (validate->parsed()) {
      return cmd_validate(validate_seed, validate_corrupt, validate_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
