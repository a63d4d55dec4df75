#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "nl4s/diagnostics.hpp"
#include "nl4s/errors.hpp"
#include "nl4s/evolution.hpp"
#include "nl4s/exponents.hpp"
#include "nl4s/field_io.hpp"
#include "nl4s/groundstate.hpp"
#include "nl4s/profiles.hpp"

namespace nl4s::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& m) { throw Error(Errc::InvalidArgument, m); }

// ---------------------------------------------------------------- config schema

json grid_keys() { return {{"d", 1}, {"alpha", 10.0}, {"L", 80.0}, {"N", 1024}}; }

json evolve_keys() {
  json j = grid_keys();
  j["L"] = 40.0;
  j["N"] = 4096;
  j.update({{"amplitude", 1.0},
            {"width", 1.0},
            {"center", json::array()},
            {"velocity", json::array()},
            {"initial_path", ""},
            {"dt0", 1e-4},
            {"t_end", 1.0},
            {"phase_cap", 0.01},
            {"dt_floor", 1e-14},
            {"dt_max", 1e-3},
            {"blowup_norm_factor", 2e3},
            {"dealias", true},
            {"snapshot_every", 0},
            {"nonlinear", true}});
  return j;
}

json defaults_for(const std::string& cmd) {
  if (cmd == "exponents") return {{"d", 5}, {"alpha", 2.0}};
  if (cmd == "groundstate") {
    json j = grid_keys();
    j.update({{"equation", "sobolev"},
              {"max_iter", 5000},
              {"tol", 0.0},
              {"step_tol", 1e-10},
              {"width", 0.0},
              {"amplitude", 1.0},
              {"seed", 0},
              {"zero_mode", "zeta"},
              {"shift", 1.0},
              {"gn_trials", 0},
              {"gn_seed", nullptr}});
    return j;
  }
  if (cmd == "evolve") {
    json j = evolve_keys();
    j["s_gs"] = 0.0;
    return j;
  }
  if (cmd == "virial") {
    json j = evolve_keys();
    j.update({{"L", 80.0}, {"N", 1024}, {"width", 2.0}, {"t_end", 0.05}, {"dt0", 1e-3}, {"dt_max", 1e-3},
              {"phase_cap", 1.0}, {"dealias", false}, {"snapshot_every", 1}, {"R", 18.0}, {"cutoff", "smooth"}});
    return j;
  }
  if (cmd == "concentration") return {{"snapshot", ""}, {"alpha", 10.0}, {"gamma", nullptr}, {"a", 1.0}};
  if (cmd == "limiting-profile") return {{"snapshot", ""}, {"profile", ""}, {"alpha", 10.0}};
  if (cmd == "profile-decomp") {
    json j = grid_keys();
    j.update({{"L", 256.0},
              {"N", 2048},
              {"inputs", json::array()},
              {"count", 16},
              {"noise_amp", 1e-3},
              {"noise_width", 1.0},
              {"seed", nullptr},
              {"amplitudes", {1.0, 0.8, 0.6}},
              {"widths", {1.0, 0.7, 0.8}},
              {"offsets", {0.0, 0.0, 0.0}},
              {"coeffs", {-0.375, 0.0, 0.375}},
              {"l_max", 5},
              {"q", 0.0},
              {"tol", 1e-2}});
    return j;
  }
  invalid("unknown command " + cmd);
}

void check_type(const json& def, const json& v, const std::string& key) {
  auto bad = [&](const char* want) { invalid("key '" + key + "' must be " + want); };
  if (def.is_boolean()) {
    if (!v.is_boolean()) bad("a boolean");
  } else if (def.is_number_integer()) {
    if (!v.is_number_integer()) bad("an integer");
  } else if (def.is_number()) {
    if (!v.is_number()) bad("a number");
  } else if (def.is_string()) {
    if (!v.is_string()) bad("a string");
  } else if (def.is_array()) {
    if (!v.is_array()) bad("an array");
    const bool strings = key == "inputs";
    for (const auto& x : v)
      if (strings ? !x.is_string() : !x.is_number()) bad(strings ? "an array of strings" : "an array of numbers");
  } else if (def.is_null()) {
    if (!v.is_null() && !v.is_number()) bad("a number or null");
  }
}

void merge_checked(json& base, const json& schema, const json& over, const std::string& where) {
  if (!over.is_object()) invalid(where + " must be a JSON object");
  for (const auto& [k, v] : over.items()) {
    if (!schema.contains(k)) invalid("unknown key '" + k + "' in " + where);
    check_type(schema[k], v, k);
    base[k] = v;
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    invalid("config " + path + " is not valid JSON: " + e.what());
  }
}

std::uint64_t required_seed(const json& c, const char* k) {
  const json& v = c.at(k);
  if (v.is_null()) invalid(std::string("key '") + k + "' is required for randomized runs");
  if (!v.is_number_integer() || v.get<long long>() < 0) invalid(std::string("key '") + k + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

double num(const json& c, const char* k) { return c.at(k).get<double>(); }
int integer(const json& c, const char* k) { return c.at(k).get<int>(); }
std::vector<double> vec(const json& c, const char* k) { return c.at(k).get<std::vector<double>>(); }

Grid grid_from(const json& c) {
  const int d = integer(c, "d");
  if (d < 1 || d > 12) invalid("d must lie in [1, 12]");
  return make_grid(d, std::vector<int>(d, integer(c, "N")), std::vector<double>(d, num(c, "L")));
}

json ext(const ExtReal& x) { return x.is_inf() ? json("inf") : json(x.value()); }

// ---------------------------------------------------------------- output

fs::path out_dir;

void ensure_out() {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create output directory " + out_dir.string() + ": " + ec.message());
}

void write_text(const std::string& name, const std::string& text) {
  ensure_out();
  const fs::path p = out_dir / name;
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error(Errc::Io, "cannot write " + p.string());
  os << text;
  if (!os) throw Error(Errc::Io, "write failed for " + p.string());
}

void write_field_file(const std::string& name, const Field& f, double t) {
  ensure_out();
  write_field((out_dir / name).string(), f, t);
}

std::string trajectory_csv(const std::vector<TrajectoryRecord>& rows) {
  std::ostringstream os;
  os << "t,dt,mass,energy,h_gamma_c,h_2,l_alpha2,l_alpha_c,max_amp\n";
  os << std::setprecision(17);
  for (const auto& r : rows)
    os << r.t << ',' << r.dt << ',' << r.mass << ',' << r.energy << ',' << r.h_gamma_c << ',' << r.h_2 << ','
       << r.l_alpha2 << ',' << r.l_alpha_c << ',' << r.max_amp << '\n';
  return os.str();
}

json norms_json(const FunctionalReport& r) {
  json j{{"mass", r.mass},
         {"energy", r.energy},
         {"h_gamma_c", r.sobolev_gamma_c},
         {"h_2", r.sobolev_2},
         {"l_alpha2", r.lebesgue_alpha2},
         {"l_alpha_c", r.lebesgue_alpha_c}};
  j["H"] = r.h_value ? json(*r.h_value) : json(nullptr);
  j["K"] = r.k_value ? json(*r.k_value) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------- commands

json cmd_exponents(const json& c) {
  const int d = integer(c, "d");
  const ExponentSet e = critical_exponents(d, num(c, "alpha"));
  json r{{"gamma_c", e.gamma_c},
         {"alpha_c", e.alpha_c},
         {"sigma", e.sigma},
         {"rate_exp", e.rate_exp},
         {"two_star_low", e.two_star_low},
         {"two_star_high", ext(e.two_star_high)}};
  if (d >= 5) {
    const LwpExponents l = lwp_exponents(d, e.alpha);
    r["lwp"] = {{"n", ext(l.n)},         {"n_star", ext(l.n_star)},   {"m_star", ext(l.m_star)},
                {"theta", l.theta},      {"p", ext(l.p)},             {"q", ext(l.q)},
                {"m", ext(l.m)},         {"m_n_admissible", l.m_n_admissible},
                {"pq_admissible", l.pq_admissible}};
  }
  return r;
}

json cmd_groundstate(const json& c) {
  const Grid g = grid_from(c);
  const ExponentSet e = critical_exponents(g.dim(), num(c, "alpha"));
  GroundStateOptions o;
  o.max_iter = integer(c, "max_iter");
  o.tol = num(c, "tol");
  o.step_tol = num(c, "step_tol");
  o.width = num(c, "width");
  o.amplitude = num(c, "amplitude");
  if (integer(c, "seed") < 0) invalid("seed must be nonnegative");
  o.seed = c.at("seed").get<std::uint64_t>();
  o.shift = num(c, "shift");
  const std::string zm = c.at("zero_mode");
  if (zm != "zeta" && zm != "project") invalid("zero_mode must be zeta or project");
  o.zero_mode = zm == "zeta" ? ZeroMode::Zeta : ZeroMode::Project;
  const std::string eq = c.at("equation");
  if (eq != "sobolev" && eq != "lebesgue") invalid("equation must be sobolev or lebesgue");

  const GroundStateResult gs =
      eq == "sobolev" ? solve_sobolev_ground_state(e, g, o) : solve_lebesgue_ground_state(e, g, o);
  const std::string file = eq == "sobolev" ? "Q.nl4s" : "R.nl4s";
  write_field_file(file, gs.field, 0.0);

  json r{{"equation", eq},
         {"field", file},
         {"iterations", gs.iterations},
         {"residual_l2", gs.residual_l2},
         {"mean_mode_defect", gs.mean_mode_defect},
         {"step_change", gs.step_change},
         {"stabilizer", gs.stabilizer},
         {"pohozaev", {{"first", gs.pohozaev_defect_1}, {"second", gs.pohozaev_defect_2}, {"equation", gs.pohozaev_equation}}},
         {"sharp_constant", gs.sharp_constant},
         {"s_gs", eq == "sobolev" ? gs.norms.sobolev_gamma_c : gs.norms.lebesgue_alpha_c},
         {"norms", norms_json(gs.norms)},
         {"low_mode", {{"s", gs.low_mode.s}, {"a_re", gs.low_mode.a.real()}, {"a_im", gs.low_mode.a.imag()}}}};
  const int trials = integer(c, "gn_trials");
  if (trials > 0) {
    if (eq != "sobolev") invalid("gn_trials applies to the sobolev equation");
    const GnReport gn = verify_gn_sharpness(gs.sharp_constant, e, g, trials, required_seed(c, "gn_seed"));
    r["gn"] = {{"trials", gn.trials}, {"max_ratio", gn.max_ratio}, {"argmax_trial", gn.argmax_trial}, {"seed", gn.seed}};
  }
  return r;
}

EvolveConfig evolve_config(const json& c) {
  EvolveConfig cfg;
  cfg.dt0 = num(c, "dt0");
  cfg.t_end = num(c, "t_end");
  cfg.phase_cap = num(c, "phase_cap");
  cfg.dt_floor = num(c, "dt_floor");
  cfg.dt_max = num(c, "dt_max");
  cfg.blowup_norm_factor = num(c, "blowup_norm_factor");
  cfg.dealias = c.at("dealias");
  cfg.snapshot_every = integer(c, "snapshot_every");
  cfg.nonlinear = c.at("nonlinear");
  cfg.validate();
  return cfg;
}

Field initial_data(const json& c, const Grid& g) {
  const std::string path = c.at("initial_path");
  if (!path.empty()) {
    Snapshot s = read_field(path);
    if (s.field.grid != g) invalid("initial field grid does not match d, L, N");
    return std::move(s.field);
  }
  const auto center = vec(c, "center"), velocity = vec(c, "velocity");
  if (!center.empty() && static_cast<int>(center.size()) != g.dim()) invalid("center needs d entries");
  if (!velocity.empty() && static_cast<int>(velocity.size()) != g.dim()) invalid("velocity needs d entries");
  if (!(num(c, "width") > 0)) invalid("width must be positive");
  return gaussian(g, num(c, "amplitude"), num(c, "width"), center, velocity);
}

EvolveResult run_evolution(const json& c, const Grid& g, const ExponentSet& e) {
  const EvolveConfig cfg = evolve_config(c);
  const Field u0 = initial_data(c, g);
  try {
    return evolve(u0, cfg, e);
  } catch (const NonFiniteError& err) {
    write_text("trajectory.csv", trajectory_csv(err.trajectory()));
    throw;
  }
}

json cmd_evolve(const json& c) {
  const Grid g = grid_from(c);
  const ExponentSet e = critical_exponents(g.dim(), num(c, "alpha"));
  const EvolveResult res = run_evolution(c, g, e);
  write_text("trajectory.csv", trajectory_csv(res.trajectory));
  json snaps = json::array();
  for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
    std::ostringstream name;
    name << "snap_" << std::setw(5) << std::setfill('0') << i << ".nl4s";
    write_field_file(name.str(), res.snapshots[i].field, res.snapshots[i].t);
    snaps.push_back({{"file", name.str()}, {"t", res.snapshots[i].t}});
  }
  write_field_file("final.nl4s", res.final_field, res.t_final);

  const auto& tr = res.trajectory;
  double mass_drift = 0, energy_drift = 0, h2_max = 0;
  for (const auto& row : tr) {
    if (tr[0].mass > 0) mass_drift = std::max(mass_drift, std::abs(row.mass / tr[0].mass - 1));
    if (tr[0].energy != 0) energy_drift = std::max(energy_drift, std::abs(row.energy / tr[0].energy - 1));
    h2_max = std::max(h2_max, row.h_2);
  }
  json r{{"status", status_name(res.status)},
         {"steps", res.steps},
         {"t_final", res.t_final},
         {"rows", tr.size()},
         {"mass_drift", mass_drift},
         {"energy_drift", energy_drift},
         {"h2_max", h2_max},
         {"h2_growth", tr[0].h_2 > 0 ? json(tr.back().h_2 / tr[0].h_2) : json(nullptr)},
         {"snapshots", snaps},
         {"final", "final.nl4s"}};
  r["T_est"] = nullptr;
  r["rate"] = nullptr;
  r["lower_bound_ok"] = nullptr;
  if (res.status == RunStatus::BlowupDetected) {
    try {
      const BlowupFit f = fit_blowup(tr, e.rate_exp);
      r["T_est"] = f.T_est;
      r["rate"] = f.rate;
      r["lower_bound_ok"] = f.lower_bound_ok;
      r["fit_rows"] = f.rows_used;
      r["rate_exp"] = e.rate_exp;
    } catch (const Error& err) {
      if (err.code() != Errc::InsufficientGrowth) throw;
      r["fit_error"] = err.what();
    }
  }
  const double s_gs = num(c, "s_gs");
  if (s_gs > 0) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& row : tr) worst = std::min(worst, energy_trapping_slack(row, s_gs, e));
    r["trapping_min_slack"] = worst;
  }
  return r;
}

json cmd_virial(const json& c) {
  const Grid g = grid_from(c);
  const ExponentSet e = critical_exponents(g.dim(), num(c, "alpha"));
  const std::string shape = c.at("cutoff");
  if (shape != "smooth" && shape != "hermite7") invalid("cutoff must be smooth or hermite7");
  const VirialCutoff cut =
      make_virial_cutoff(g, num(c, "R"), shape == "smooth" ? CutoffShape::Smooth : CutoffShape::Hermite7);
  if (integer(c, "snapshot_every") < 1) invalid("virial needs snapshot_every >= 1");
  const EvolveResult res = run_evolution(c, g, e);
  const VirialCheck v = check_virial_law(res.snapshots, e, cut, c.at("nonlinear"));

  std::ostringstream os;
  os << "t,action,dMdt,rhs\n" << std::setprecision(17);
  for (std::size_t i = 0; i < v.dMdt.size(); ++i)
    os << v.t[i + 1] << ',' << v.action[i + 1] << ',' << v.dMdt[i] << ',' << v.rhs[i] << '\n';
  write_text("virial.csv", os.str());
  write_text("trajectory.csv", trajectory_csv(res.trajectory));
  return {{"max_defect", v.max_defect},
          {"max_exterior_mass", v.max_exterior_mass},
          {"snapshots", res.snapshots.size()},
          {"status", status_name(res.status)},
          {"theta_far_value", cut.theta.far_value()},
          {"cutoff_check",
           {{"max_theta2", cut.report.max_theta2},
            {"min_radial", cut.report.min_radial},
            {"min_laplacian", cut.report.min_laplacian}}}};
}

Snapshot read_required(const json& c, const char* key) {
  const std::string p = c.at(key);
  if (p.empty()) invalid(std::string("key '") + key + "' is required");
  return read_field(p);
}

json cmd_concentration(const json& c) {
  const Snapshot s = read_required(c, "snapshot");
  const ExponentSet e = critical_exponents(s.field.grid.dim(), num(c, "alpha"));
  const double gamma = c.at("gamma").is_null() ? e.gamma_c : num(c, "gamma");
  const Concentration k = concentration_scan(s.field, gamma, num(c, "a"));
  return {{"t", s.t}, {"gamma", gamma}, {"center", k.center}, {"index", k.index}, {"value", k.value}};
}

json cmd_limiting_profile(const json& c) {
  const Snapshot s = read_required(c, "snapshot");
  const Snapshot q = read_required(c, "profile");
  const ExponentSet e = critical_exponents(s.field.grid.dim(), num(c, "alpha"));
  const ProfileComparison p = limiting_profile_compare(s.field, q.field, e);
  write_field_file("aligned.nl4s", p.aligned, s.t);
  return {{"t", s.t},
          {"lam", p.lam},
          {"shift", p.shift},
          {"phase", p.phase},
          {"dist_gamma_c", p.dist_gamma_c},
          {"dist_2", p.dist_2},
          {"aligned", "aligned.nl4s"}};
}

json cmd_profile_decomp(const json& c) {
  std::vector<Field> seq;
  const auto inputs = c.at("inputs").get<std::vector<std::string>>();
  int d = integer(c, "d");
  if (!inputs.empty()) {
    for (const auto& p : inputs) seq.push_back(read_field(p).field);
    d = seq.front().grid.dim();
  } else {
    const Grid g = grid_from(c);
    const auto amp = vec(c, "amplitudes"), wid = vec(c, "widths"), off = vec(c, "offsets"), co = vec(c, "coeffs");
    if (wid.size() != amp.size() || off.size() != amp.size() || co.size() != amp.size())
      invalid("amplitudes, widths, offsets and coeffs need equal lengths");
    std::vector<Field> prof;
    for (std::size_t j = 0; j < amp.size(); ++j) {
      if (!(wid[j] > 0)) invalid("profile widths must be positive");
      prof.push_back(gaussian(g, amp[j], wid[j]));
    }
    const ShiftLaw law = [&](int j, int n) {
      std::vector<double> x(g.dim(), 0.0);
      x[0] = off[j] + co[j] * n * n;
      return x;
    };
    const double noise = num(c, "noise_amp");
    const std::uint64_t seed = noise > 0 ? required_seed(c, "seed") : 0;
    seq = synth_sequence(g, prof, law, noise, integer(c, "count"), seed, num(c, "noise_width"));
  }
  const ExponentSet e = critical_exponents(d, num(c, "alpha"));
  DecomposeOptions o;
  o.l_max = integer(c, "l_max");
  o.q = num(c, "q");
  o.tol = num(c, "tol");
  const ProfileDecomposition dec = decompose(seq, e, o);

  json profs = json::array();
  for (std::size_t j = 0; j < dec.profiles.size(); ++j) {
    const std::string name = "profile_" + std::to_string(j) + ".nl4s";
    write_field_file(name, dec.profiles[j], 0.0);
    profs.push_back({{"file", name},
                     {"h_gamma_c", sobolev_norm(dec.profiles[j], e.gamma_c)},
                     {"h_2", sobolev_norm(dec.profiles[j], 2)},
                     {"shifts", dec.shifts[j]}});
  }
  return {{"count", dec.profiles.size()},
          {"sequence_length", seq.size()},
          {"tail_begin", dec.tail_begin},
          {"profiles", profs},
          {"defect_gamma_c", dec.defect_gamma_c},
          {"defect_2", dec.defect_2},
          {"residual_lq", dec.residual_lq}};
}

using Command = json (*)(const json&);

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> m{{"exponents", cmd_exponents},
                                                {"groundstate", cmd_groundstate},
                                                {"evolve", cmd_evolve},
                                                {"virial", cmd_virial},
                                                {"concentration", cmd_concentration},
                                                {"limiting-profile", cmd_limiting_profile},
                                                {"profile-decomp", cmd_profile_decomp}};
  return m;
}

// parse "key=value", value as JSON when it parses, else as a string
std::pair<std::string, json> parse_set(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) invalid("--set expects key=value, got " + s);
  const std::string v = s.substr(eq + 1);
  json j = json::parse(v, nullptr, false);
  if (j.is_discarded()) j = v;
  return {s.substr(0, eq), j};
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Numerical experiments for the focusing fourth-order Schroedinger equation", "nl4s"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NL4S_VERSION);

  std::string out = "nl4s_run", config;
  std::vector<std::string> sets;
  json flags = json::object();

  struct FlagSpec {
    const char* name;
    const char* key;
    bool integer;
  };
  const std::vector<FlagSpec> numeric{{"-d,--dim", "d", true},      {"-a,--alpha", "alpha", false},
                                      {"-L,--length", "L", false},  {"-N,--points", "N", true},
                                      {"--seed", "seed", true},     {"--gn-seed", "gn_seed", true},     {"--t-end", "t_end", false},
                                      {"--amplitude", "amplitude", false}, {"--width", "width", false},
                                      {"-R,--radius", "R", false},  {"--gamma", "gamma", false},
                                      {"--window", "a", false},     {"--trials", "gn_trials", true}};
  const std::vector<std::pair<const char*, const char*>> strings{
      {"--equation", "equation"}, {"--snapshot", "snapshot"}, {"--profile", "profile"}, {"--initial", "initial_path"}};

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, fn] : commands()) {
    (void)fn;
    static const std::map<std::string, std::string> blurb{
        {"exponents", "critical exponents and admissible pairs for (d, alpha)"},
        {"groundstate", "solve for the Sobolev or Lebesgue ground state"},
        {"evolve", "split-step evolution with blowup detection"},
        {"virial", "localized virial law check on a smooth run"},
        {"concentration", "windowed critical-norm concentration of a snapshot"},
        {"limiting-profile", "align a snapshot against a ground state"},
        {"profile-decomp", "profile decomposition of a synthetic or given sequence"}};
    CLI::App* sub = app.add_subcommand(name, blurb.at(name));
    subs[name] = sub;
    sub->add_option("--out", out, "run directory");
    sub->add_option("--config", config, "JSON config file");
    sub->add_option("--set", sets, "override a config key, key=value");
    const json def = defaults_for(name);
    for (const auto& f : numeric) {
      if (!def.contains(f.key)) continue;
      const std::string key = f.key;
      if (f.integer)
        sub->add_option_function<long long>(f.name, [&flags, key](const long long& v) { flags[key] = v; });
      else
        sub->add_option_function<double>(f.name, [&flags, key](const double& v) { flags[key] = v; });
    }
    for (const auto& [flag, k] : strings) {
      if (!def.contains(k)) continue;
      const std::string key = k;
      sub->add_option_function<std::string>(flag, [&flags, key](const std::string& v) { flags[key] = v; });
    }
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string cmd;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cmd = name;

  try {
    const json schema = defaults_for(cmd);
    json cfg = schema;
    if (!config.empty()) merge_checked(cfg, schema, load_json_file(config), config);
    for (const auto& s : sets) {
      auto [k, v] = parse_set(s);
      merge_checked(cfg, schema, json{{k, v}}, "--set");
    }
    merge_checked(cfg, schema, flags, "command-line flags");

    out_dir = out;
    const json result = commands().at(cmd)(cfg);
    const json summary{{"command", cmd}, {"version", NL4S_VERSION}, {"config", cfg}, {"result", result}};
    write_text("summary.json", summary.dump(2) + "\n");
    std::cout << result.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "nl4s " << cmd << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const json::exception& e) {
    std::cerr << "nl4s " << cmd << ": bad config value: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "nl4s " << cmd << ": " << e.what() << "\n";
    return 3;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace nl4s::cli
