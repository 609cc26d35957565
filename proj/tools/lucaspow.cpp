// SPDX-License-Identifier: Apache-2.0
// Command-line front end for the verification campaigns.
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "lucaspow/campaign.hpp"

namespace {

using lucaspow::campaign::CampaignConfig;
using lucaspow::campaign::Command;
namespace cp = lucaspow::campaign;

struct RangeText {
  std::string r, n, x, m;
};

void add_range(CLI::App* sub, const char* name, std::string& slot, const char* what) {
  sub->add_option(name, slot, std::string(what) + " range, a..b or a");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification campaigns for U_n^x + U_{n+1}^x = U_m over Lucas sequences"};
  app.set_version_flag("--version", std::string(cp::kVersion));
  app.set_config("--config", "", "TOML file with campaign settings (flags take precedence)");
  app.require_subcommand(1);
  app.fallthrough();

  CampaignConfig cfg;
  RangeText ranges;
  app.add_option("--prec-min", cfg.prec_min, "Lowest precision rung in bits")->capture_default_str();
  app.add_option("--prec-max", cfg.prec_max, "Precision ceiling in bits")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  app.add_option("--out", cfg.out, "Report path (stdout when omitted)");
  app.add_option("--format", cfg.format, "Report format")->capture_default_str();

  std::map<CLI::App*, Command> commands;
  auto sub = [&](Command c, const char* help) {
    CLI::App* s = app.add_subcommand(std::string(cp::command_name(c)), help);
    commands[s] = c;
    return s;
  };

  CLI::App* s = sub(Command::identities, "Exact identity suite over r and n");
  add_range(s, "--r", ranges.r, "r");
  add_range(s, "--n", ranges.n, "n (may be negative)");

  s = sub(Command::sieve, "Divisor filter and mod-T sieve over (n, x)");
  add_range(s, "--n", ranges.n, "n");
  add_range(s, "--x", ranges.x, "x");
  s->add_option("--r-max-fallback", cfg.r_max_fallback, "r bound when the filter gives D = 0")
      ->capture_default_str();
  s->add_option("--primes", cfg.prime_count, "T is the product of this many primes")
      ->capture_default_str();
  s->add_flag("--control-x2", cfg.control_x2, "Also run the x = 2, m = 2n+1 control rows");
  s->add_flag("--all-m", cfg.all_m, "Do not skip even m");

  s = sub(Command::n1, "U_m(r) = 1 + r^x as a polynomial search");
  add_range(s, "--m", ranges.m, "m");
  add_range(s, "--x", ranges.x, "x");

  s = sub(Command::reduce_walax, "Baker-Davenport reduction of the x bound");
  add_range(s, "--r", ranges.r, "r");
  add_range(s, "--n", ranges.n, "n");
  s->add_option("--M", cfg.M, "Bound on x before reduction (default 3e17)");
  s->add_option("--samples", cfg.r_samples, "Log-spaced r sample size (0: all)");
  s->add_option("--max-attempts", cfg.max_attempts, "Convergents tried per instance")
      ->capture_default_str();

  s = sub(Command::reduce_walay, "Baker-Davenport reduction of the n bound for r = 3");
  add_range(s, "--x", ranges.x, "x");
  s->add_option("--M", cfg.M, "Bound on the coefficient (default 2e14)");
  s->add_option("--max-attempts", cfg.max_attempts, "Convergents tried per instance")
      ->capture_default_str();

  s = sub(Command::legendre_wala, "Convergents and Legendre audit of log sqrt(delta) / log alpha");
  add_range(s, "--r", ranges.r, "r");
  s->add_option("--samples", cfg.r_samples, "Log-spaced r sample size (default 200)");
  s->add_option("--M", cfg.M, "Denominator bound (default 3e20)");
  s->add_option("--audit-samples", cfg.audit_samples, "Random denominators per r")
      ->capture_default_str();
  s->add_option("--seed", cfg.seed, "Audit seed")->capture_default_str();

  s = sub(Command::bounds, "Explicit ceilings on x from linear forms in logarithms");
  add_range(s, "--r", ranges.r, "r");
  add_range(s, "--n", ranges.n, "n");
  s->add_option("--samples", cfg.r_samples, "Log-spaced r sample size (0: all)");

  s = sub(Command::approx_check, "Approximation residuals zeta, zeta' and zeta''");
  add_range(s, "--r", ranges.r, "r");
  s->add_option("--samples", cfg.r_samples, "Log-spaced r sample size (default 200)");
  s->add_option("--zeta-n", cfg.zeta_n, "n values for zeta''")->capture_default_str();

  s = sub(Command::minimal_s, "Least s with U_m | U_{n+1}^s - U_n^s");
  add_range(s, "--r", ranges.r, "r");
  add_range(s, "--n", ranges.n, "n");
  add_range(s, "--m", ranges.m, "m");
  s->add_option("--s-max", cfg.s_max, "Largest s tried")->capture_default_str();

  s = sub(Command::cube_check, "U_n^3 + U_{n+1}^3 < U_{3n+1} for r = 4");
  add_range(s, "--n", ranges.n, "n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cp::kExitUsage;
  }

  try {
    for (const auto& [subapp, command] : commands) {
      if (subapp->parsed()) cfg.command = command;
    }
    if (!ranges.r.empty()) cfg.r_range = cp::parse_range(ranges.r);
    if (!ranges.n.empty()) cfg.n_range = cp::parse_range(ranges.n);
    if (!ranges.x.empty()) cfg.x_range = cp::parse_range(ranges.x);
    if (!ranges.m.empty()) cfg.m_range = cp::parse_range(ranges.m);

    cp::CampaignReport report = cp::run(cfg);
    if (cfg.out.empty()) {
      std::cout << report.doc.dump(2) << '\n';
    } else {
      cp::emit_report(report, cfg.out);
    }
    const auto& agg = report.doc["aggregate"];
    std::cerr << cp::command_name(cfg.command) << ": " << report.item_count << " items, "
              << agg["violations"].size() << " violations, " << agg["precision_unstable"].size()
              << " precision-unstable";
    if (report.doc["meta"]["partially_verified"].get<bool>()) {
      std::cerr << " (partially verified)";
    }
    std::cerr << ", exit " << report.exit_code << '\n';
    return report.exit_code;
  } catch (const cp::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cp::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cp::kExitUsage;
  }
}
