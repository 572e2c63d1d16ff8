#include "routegame/cli.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "routegame/config_io.hpp"
#include "routegame/errors.hpp"
#include "routegame/format.hpp"
#include "routegame/mc_oracle.hpp"
#include "routegame/provider.hpp"
#include "routegame/user_response.hpp"

namespace routegame::cli {

namespace {

// Flat key=value lines, one per field, in insertion order.
class Record {
 public:
  explicit Record(std::ostream& out) : out_(out) {}

  Record& put(std::string_view key, double value) { return text(key, format_double(value)); }
  Record& put(std::string_view key, int value) { return text(key, std::to_string(value)); }
  Record& put(std::string_view key, std::int64_t value) { return text(key, std::to_string(value)); }
  Record& put(std::string_view key, std::uint64_t value) { return text(key, std::to_string(value)); }
  Record& put(std::string_view key, bool value) { return text(key, value ? "1" : "0"); }
  Record& text(std::string_view key, std::string_view value) {
    out_ << key << '=' << value << '\n';
    return *this;
  }

  void outcomes(std::string_view prefix, const Outcomes& o) {
    const std::string p(prefix);
    put(p + "S", o.S).put(p + "L", o.L).put(p + "C", o.C).put(p + "U", o.U).put(p + "J", o.J);
  }

 private:
  std::ostream& out_;
};

Route route_from_index(int i) {
  if (i == 1) return Route::Model1;
  if (i == 2) return Route::Model2;
  throw ValidationError("--i must be 1 or 2 (got " + std::to_string(i) + ")");
}

std::pair<int, int> parse_resolution(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) {
    throw ValidationError("--res must look like N1xN2 (got '" + text + "')");
  }
  int n1 = 0;
  int n2 = 0;
  try {
    std::size_t used1 = 0;
    std::size_t used2 = 0;
    const std::string a = text.substr(0, x);
    const std::string b = text.substr(x + 1);
    n1 = std::stoi(a, &used1);
    n2 = std::stoi(b, &used2);
    if (used1 != a.size() || used2 != b.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw ValidationError("--res must look like N1xN2 (got '" + text + "')");
  }
  if (n1 < 1 || n2 < 1) {
    throw ValidationError("--res must have N1 >= 1 and N2 >= 1 (got '" + text + "')");
  }
  return {n1, n2};
}

void validate(const RunSpec& spec) {
  if (spec.config_path.empty()) throw ValidationError("--config is required");
  if (spec.i) route_from_index(*spec.i);
  if (spec.s && !(*spec.s >= 0.0 && *spec.s <= 1.0)) {
    throw ValidationError("--s must lie in [0, 1] (got " + format_double(*spec.s) + ")");
  }
  if (spec.q && !(*spec.q >= 0.0 && *spec.q <= 1.0)) {
    throw ValidationError("--q must lie in [0, 1] (got " + format_double(*spec.q) + ")");
  }
  if (!(spec.epsilon > 0.0)) {
    throw ValidationError("--epsilon must be positive (got " + format_double(spec.epsilon) + ")");
  }
  switch (spec.subcommand) {
    case Subcommand::BestResponse:
      if (!spec.i) throw ValidationError("best-response requires --i");
      break;
    case Subcommand::Sweep:
      if (!spec.axis1 || !spec.axis2) throw ValidationError("sweep requires --axis1 and --axis2");
      if (spec.n1 < 1 || spec.n2 < 1) throw ValidationError("sweep requires --res N1xN2");
      if (spec.s && !spec.i) throw ValidationError("sweep --s requires --i");
      break;
    case Subcommand::Simulate:
      if (!spec.i) throw ValidationError("simulate requires --i");
      if (spec.n < 1000) {
        throw ValidationError("--n must be at least 1000 (got " + std::to_string(spec.n) + ")");
      }
      break;
    default:
      break;
  }
}

void emit_equilibrium(Record& rec, const GameConfig& cfg, const Equilibrium& eq) {
  rec.text("regime", to_string(net_values(cfg).regime));
  rec.put("i_star", route_index(eq.policy.route()));
  rec.put("s_star", eq.policy.s());
  rec.put("q_star", eq.q_star);
  rec.outcomes("", eq.outcomes);
  rec.text("provenance", to_string(eq.provenance));
  rec.put("s_admissible_lo", eq.s_admissible_lo);
  rec.put("s_admissible_hi", eq.s_admissible_hi);
  rec.put("boundary_tie", eq.boundary_tie);
}

void emit_best_response(Record& rec, const GameConfig& cfg, const ProviderPolicy& policy) {
  const BestResponse br = user_best_response(cfg, policy);
  rec.put("i", route_index(policy.route()));
  rec.put("s", policy.s());
  rec.text("regime", to_string(br.regime));
  rec.put("q_star", br.q_star);
  rec.text("kind", to_string(br.kind));
  if (br.thresholds.s0) rec.put("s0", *br.thresholds.s0);
  if (br.thresholds.s_low) rec.put("s_low", *br.thresholds.s_low);
  if (br.thresholds.s_high) rec.put("s_high", *br.thresholds.s_high);
  rec.outcomes("", expected_outcomes(cfg, policy, UserResponse(br.q_star)));
}

void emit_simulation(Record& rec, const GameConfig& cfg, const RunSpec& spec) {
  const ProviderPolicy policy(route_from_index(*spec.i), spec.s.value_or(0.0));
  const double q = spec.q ? *spec.q : user_best_response(cfg, policy).q_star;
  const mc::McEstimate est = mc::estimate(cfg, policy, UserResponse(q), spec.n, spec.seed,
                                          spec.workers);
  rec.put("i", route_index(policy.route()));
  rec.put("s", policy.s());
  rec.put("q", q);
  rec.put("n", est.n);
  rec.put("seed", est.seed);
  const std::pair<const char*, double Outcomes::*> fields[] = {
      {"S", &Outcomes::S}, {"L", &Outcomes::L}, {"C", &Outcomes::C},
      {"U", &Outcomes::U}, {"J", &Outcomes::J}};
  for (const auto& [name, member] : fields) {
    rec.put(std::string(name) + "_mean", est.mean.*member);
    rec.put(std::string(name) + "_stderr", est.std_error.*member);
  }
  rec.put("mean_steps", est.mean_steps);
  rec.put("truncated", est.max_steps_hit);
  rec.put("accepted", est.accepted());
}

void emit_throttle(Record& rec, const GameConfig& cfg, double epsilon) {
  const ThrottleReport report = throttle_analysis(cfg, epsilon);
  rec.put("j_pre", report.j_pre);
  rec.put("j_post", report.j_post);
  rec.put("gain", report.gain);
  rec.text("best", to_string(report.best));
  rec.put("t1_hat", report.t1_hat);
  rec.put("t2_hat", report.t2_hat);
  rec.put("delta_u_post", report.delta_u_post);
  for (const ThrottleOutcome& v : report.variants) {
    const std::string p = std::string(to_string(v.variant)) + "_";
    rec.put(p + "t1_hat", v.t1_hat);
    rec.put(p + "t2_hat", v.t2_hat);
    rec.put(p + "j_post", v.j_post);
    rec.put(p + "gain", v.gain);
  }
}

void emit_misalignment(Record& rec, const GameConfig& cfg) {
  const MisalignmentReport report = misalignment_gap(cfg);
  rec.text("regime", to_string(net_values(cfg).regime));
  rec.put("delta_U", report.delta_u);
  rec.put("aligned", report.aligned);
  rec.put("predicate_item", report.predicate.item);
  rec.put("predicate_lhs", report.predicate.lhs);
  rec.put("predicate_rhs", report.predicate.rhs);
  rec.put("predicate_holds", report.predicate.holds);
  rec.put("user_i", route_index(report.user_opt.policy.route()));
  rec.put("user_s", report.user_opt.policy.s());
  rec.put("user_q", report.user_opt.q);
  rec.put("user_U", report.user_opt.U);
  rec.put("provider_i", route_index(report.provider_opt.policy.route()));
  rec.put("provider_s", report.provider_opt.policy.s());
  rec.put("provider_q", report.provider_opt.q_star);
  rec.put("provider_U", report.provider_opt.outcomes.U);
  rec.put("provider_J", report.provider_opt.outcomes.J);
}

void execute(const RunSpec& spec, const GameConfig& cfg, std::ostream& out) {
  Record rec(out);
  switch (spec.subcommand) {
    case Subcommand::Solve:
      emit_equilibrium(rec, cfg, solve_equilibrium(cfg));
      return;
    case Subcommand::BestResponse:
      emit_best_response(rec, cfg, ProviderPolicy(route_from_index(*spec.i), spec.s.value_or(0.0)));
      return;
    case Subcommand::Sweep: {
      SweepOptions options;
      options.epsilon = spec.epsilon;
      options.workers = spec.workers;
      if (spec.i) options.fixed_policy = ProviderPolicy(route_from_index(*spec.i), spec.s.value_or(0.0));
      write_sweep_csv(out, sweep(cfg, *spec.axis1, *spec.axis2, spec.n1, spec.n2, options));
      return;
    }
    case Subcommand::Simulate:
      emit_simulation(rec, cfg, spec);
      return;
    case Subcommand::Throttle:
      emit_throttle(rec, cfg, spec.epsilon);
      return;
    case Subcommand::Misalign:
      emit_misalignment(rec, cfg);
      return;
  }
}

}  // namespace

std::string_view to_string(Subcommand subcommand) {
  switch (subcommand) {
    case Subcommand::Solve: return "solve";
    case Subcommand::BestResponse: return "best-response";
    case Subcommand::Sweep: return "sweep";
    case Subcommand::Simulate: return "simulate";
    case Subcommand::Throttle: return "throttle";
    case Subcommand::Misalign: return "misalign";
  }
  return "unknown";
}

std::optional<RunSpec> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunSpec spec;
  CLI::App app{"Two-model routing game solver", "routing-game"};
  app.require_subcommand(1);

  std::string axis1;
  std::string axis2;
  std::string res;
  int i = 0;
  double s = 0.0;
  double q = 0.0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", spec.config_path, "JSON game config")->required();
    sub->add_option("--out", spec.out_path, "output path (default: stdout)");
  };
  std::vector<CLI::Option*> i_opts;
  std::vector<CLI::Option*> s_opts;
  const auto add_policy = [&](CLI::App* sub) {
    i_opts.push_back(sub->add_option("--i", i, "initial model (1 or 2)"));
    s_opts.push_back(sub->add_option("--s", s, "cascade probability in [0, 1]"));
  };

  CLI::App* solve = app.add_subcommand("solve", "provider-optimal policy and user response");
  add_common(solve);

  CLI::App* best = app.add_subcommand("best-response", "user best response to a fixed policy");
  add_common(best);
  add_policy(best);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "two-axis parameter sweep as CSV");
  add_common(sweep_cmd);
  add_policy(sweep_cmd);
  sweep_cmd->add_option("--axis1", axis1, "name:lo:hi")->required();
  sweep_cmd->add_option("--axis2", axis2, "name:lo:hi")->required();
  sweep_cmd->add_option("--res", res, "N1xN2")->required();
  sweep_cmd->add_option("--epsilon", spec.epsilon, "throttle margin");
  sweep_cmd->add_option("--workers", spec.workers, "worker threads (0: all cores)");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo estimate of a session");
  add_common(simulate);
  add_policy(simulate);
  CLI::Option* q_opt = simulate->add_option("--q", q, "abandonment probability (default: best response)");
  simulate->add_option("--n", spec.n, "episodes");
  simulate->add_option("--seed", spec.seed, "RNG seed");
  simulate->add_option("--workers", spec.workers, "worker threads (0: all cores)");

  CLI::App* throttle = app.add_subcommand("throttle", "provider gain from latency throttling");
  add_common(throttle);
  throttle->add_option("--epsilon", spec.epsilon, "throttle margin");

  CLI::App* misalign = app.add_subcommand("misalign", "user utility lost to the provider optimum");
  add_common(misalign);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ValidationError(e.what());
  }

  const std::pair<CLI::App*, Subcommand> table[] = {
      {solve, Subcommand::Solve},       {best, Subcommand::BestResponse},
      {sweep_cmd, Subcommand::Sweep},   {simulate, Subcommand::Simulate},
      {throttle, Subcommand::Throttle}, {misalign, Subcommand::Misalign}};
  for (const auto& [sub, kind] : table) {
    if (sub->parsed()) spec.subcommand = kind;
  }
  const auto given = [](const std::vector<CLI::Option*>& opts) {
    return std::any_of(opts.begin(), opts.end(), [](const CLI::Option* o) { return o->count() > 0; });
  };
  if (given(i_opts)) spec.i = i;
  if (given(s_opts)) spec.s = s;
  if (q_opt->count() > 0) spec.q = q;
  if (spec.subcommand == Subcommand::Sweep) {
    spec.axis1 = AxisSpec::parse(axis1);
    spec.axis2 = AxisSpec::parse(axis2);
    std::tie(spec.n1, spec.n2) = parse_resolution(res);
  }
  validate(spec);
  return spec;
}

void run(const RunSpec& spec, std::ostream& out) {
  validate(spec);
  const GameConfig cfg = load_config(spec.config_path);
  // Buffer the artifact so a failure never leaves a partial output file.
  std::ostringstream buf;
  execute(spec, cfg, buf);
  if (spec.out_path.empty()) {
    out << buf.str();
    return;
  }
  std::ofstream file(spec.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ValidationError("cannot write output file '" + spec.out_path + "'");
  file << buf.str();
  if (!file.flush()) throw ValidationError("failed writing output file '" + spec.out_path + "'");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<RunSpec> spec = parse_args(argc, argv, out);
    if (spec) run(*spec, out);
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace routegame::cli
