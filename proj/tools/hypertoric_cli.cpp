// Command-line front end: analyze a subtorus request into a JSON report,
// scan the standard deformation directions into a CSV table, or classify a
// list of slope invariants into chain-equivalence classes.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "hypertoric/errors.hpp"
#include "hypertoric/report.hpp"
#include "hypertoric/strata.hpp"

using namespace hypertoric;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::ParseError, "cannot open input file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::optional<std::string>& out_path,
          const std::string& content) {
  if (out_path)
    write_file_atomic(*out_path, content);
  else
    std::cout << content;
}

int cmd_analyze(const std::string& request_path,
                const std::optional<std::string>& out_path,
                const std::optional<std::string>& dot_path,
                const std::optional<std::string>& csv_prefix,
                const std::optional<std::uint64_t>& seed, int jobs) {
  AnalysisRequest request = parse_request_text(slurp(request_path));
  if (seed) request.seed = *seed;
  Json report = run_analysis(request, jobs);

  if (dot_path) {
    std::string dot = to_dot(qac_compactification(request.subtorus));
    if (request.sigma) {
      dot += "\n";
      dot += to_dot(tn_compactification(request.subtorus, *request.sigma));
    }
    write_file_atomic(*dot_path, dot);
  }
  if (csv_prefix) {
    for (std::size_t i = 0; i < report["probes"].size(); ++i) {
      const Json& probe = report["probes"][i];
      if (probe["kind"] != "decay" || !probe["error"].is_null()) continue;
      DecayFit fit;
      for (const auto& sample : probe["result"]["samples"])
        fit.samples.emplace_back(sample[0].get<double>(),
                                 sample[1].get<double>());
      write_file_atomic(*csv_prefix + "_probe" + std::to_string(i) + ".csv",
                        decay_csv(fit));
    }
  }
  emit(out_path, report.dump(2) + "\n");
  return report_is_singular(report) ? 2 : 0;
}

int cmd_scan_sigma(const std::string& request_path,
                   const std::optional<std::string>& out_path) {
  AnalysisRequest request = parse_request_text(slurp(request_path));
  emit(out_path, scan_csv(run_sigma_scan(request.subtorus)));
  return 0;
}

int cmd_classify(const std::string& request_path,
                 const std::optional<std::string>& out_path) {
  Json doc = Json::parse(slurp(request_path), nullptr, false);
  if (doc.is_discarded())
    throw Error(ErrorCode::ParseError, "request is not valid JSON");
  if (!doc.is_object() || !doc.contains("slopes") ||
      !doc["slopes"].is_array())
    throw Error(ErrorCode::ParseError,
                "at /slopes: expected an array of slope strings");
  std::vector<std::string> slopes;
  for (std::size_t i = 0; i < doc["slopes"].size(); ++i) {
    if (!doc["slopes"][i].is_string())
      throw Error(ErrorCode::ParseError,
                  "at /slopes/" + std::to_string(i) + ": expected a string");
    slopes.push_back(doc["slopes"][i].get<std::string>());
  }
  emit(out_path, classes_json(classify_slopes(slopes)).dump(2) + "\n");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants of toric hyperkaehler quotients"};
  app.require_subcommand(1);

  std::string request_path;
  std::optional<std::string> out_path, dot_path, csv_prefix;
  std::optional<std::uint64_t> seed;
  int jobs = 1;

  CLI::App* analyze =
      app.add_subcommand("analyze", "Full invariant report as JSON");
  analyze->add_option("request", request_path, "request JSON file")
      ->required();
  analyze->add_option("--out", out_path, "write the report here");
  analyze->add_option("--dot", dot_path, "write boundary posets as DOT");
  analyze->add_option("--csv", csv_prefix,
                      "write decay samples as <prefix>_probeN.csv");
  analyze->add_option("--seed", seed, "override the request seed");
  analyze->add_option("--jobs", jobs, "parallel probe workers")
      ->check(CLI::Range(1, 64));

  CLI::App* scan = app.add_subcommand(
      "scan-sigma", "Cone dimensions over the standard direction families");
  scan->add_option("request", request_path, "request JSON file")->required();
  scan->add_option("--out", out_path, "write the CSV table here");

  CLI::App* classify = app.add_subcommand(
      "classify-slopes", "Group slope invariants by chain equivalence");
  classify->add_option("request", request_path,
                       "JSON file with a \"slopes\" array")
      ->required();
  classify->add_option("--out", out_path, "write the classes here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed())
      return cmd_analyze(request_path, out_path, dot_path, csv_prefix, seed,
                         jobs);
    if (scan->parsed()) return cmd_scan_sigma(request_path, out_path);
    return cmd_classify(request_path, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
