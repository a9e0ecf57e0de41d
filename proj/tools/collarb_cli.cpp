// Command-line front end. Negative mathematical answers are successful runs;
// exit 2 is reserved for bad input and 3 for numeric failures.
#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "collarb/fixtures.hpp"
#include "collarb/report.hpp"

using namespace collarb;

namespace {

enum Exit { ok = 0, input_error = 2, numeric_error = 3 };

void emit(const Report& r, const std::string& format) {
  std::cout << (format == "structured" ? render_structured(r) : render_table(r));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collarb: arbitrage, minimax measures and beneficial exchanges on finite markets"};
  app.require_subcommand(1);
  std::string model_path;
  std::string format = "table";
  double tol = 1e-10;
  std::uint64_t seed = 1;
  auto add_common = [&](CLI::App* sub, bool needs_model) {
    if (needs_model) sub->add_option("--model", model_path, "model file")->required();
    sub->add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"table", "structured"}));
  };

  auto* validate = app.add_subcommand("validate", "check model invariants");
  auto* arbitrage = app.add_subcommand("arbitrage", "individual and collective arbitrage");
  auto* measures = app.add_subcommand("measures", "martingale measure polytopes");
  auto* minimax = app.add_subcommand("minimax", "per-agent minimax measures");
  auto* beneficial = app.add_subcommand("beneficial", "search for strictly beneficial exchanges");
  for (auto* sub : {validate, arbitrage, measures, minimax, beneficial}) add_common(sub, true);

  auto* cara = app.add_subcommand("cara-region", "trade region of two CARA agents on one event");
  CaraQuery cq;
  double alpha = -1, beta = 0;
  cara->add_option("--q1", cq.spec.q1, "agent 1 minimax mass of A")->required();
  cara->add_option("--q2", cq.spec.q2, "agent 2 minimax mass of A")->required();
  cara->add_option("--gamma1", cq.spec.gamma1, "agent 1 risk aversion");
  cara->add_option("--gamma2", cq.spec.gamma2, "agent 2 risk aversion");
  auto* alpha_opt = cara->add_option("--alpha", alpha, "test point: size of the indicator leg");
  cara->add_option("--beta", beta, "test point: fee")->needs(alpha_opt);
  cara->add_option("--samples", cq.boundary_samples, "boundary table rows");
  cara->add_option("--random-points", cq.random_points, "interior points to sample");
  add_common(cara, false);

  auto* fixtures = app.add_subcommand("fixtures", "built-in reference models");
  fixtures->require_subcommand(1);
  auto* fx_emit = fixtures->add_subcommand("emit", "write a fixture model file");
  std::string fixture_name, out_path;
  fx_emit->add_option("--name", fixture_name, "fixture name")->required()->check(CLI::IsMember(fixture_names()));
  fx_emit->add_option("--out", out_path, "output path (default stdout)");
  auto* fx_list = fixtures->add_subcommand("list", "list fixture names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : input_error;
  }

  try {
    if (fx_emit->parsed()) {
      const auto text = serialize_model(make_fixture(fixture_name));
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw InputError("cannot write '" + out_path + "'");
        out << text;
      }
      return ok;
    }
    if (fx_list->parsed()) {
      for (const auto& n : fixture_names()) std::cout << n << "\n";
      return ok;
    }

    const auto start = std::chrono::steady_clock::now();
    Report report;
    if (cara->parsed()) {
      if (alpha >= 0) cq.point = std::make_pair(alpha, beta);
      cq.seed = seed;
      report = report_cara(cq);
    } else {
      const auto doc = load_model(model_path);
      MinimaxOptions mopts;
      mopts.tol = tol;
      PolarityOptions popts;
      popts.solver_tol = tol;
      if (validate->parsed()) report = report_validate(doc);
      if (arbitrage->parsed()) report = report_arbitrage(doc);
      if (measures->parsed()) report = report_measures(doc);
      if (minimax->parsed()) report = report_minimax(doc, mopts);
      if (beneficial->parsed()) report = report_beneficial(doc, popts);
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(report, format);
    return ok;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return numeric_error;
  } catch (const InternalInconsistency& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return numeric_error;
  }
}
