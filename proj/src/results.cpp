#include "qrwa/results.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qrwa {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* metric_token(LengthMetric m) {
  return m == LengthMetric::Actual ? "actual" : "effective";
}

}  // namespace

const char* heuristic_token(Heuristic h) {
  switch (h) {
    case Heuristic::KspFf: return "kspff";
    case Heuristic::Mqdo: return "mqdo";
    case Heuristic::Mqcco: return "mqcco";
    case Heuristic::Qtd: return "qtd";
  }
  return "?";
}

std::string aggregate_csv(const SweepResult& result) {
  std::string out =
      "algorithm,power_control,length_metric,request_count,classical_load,"
      "blocking_ratio,blocking_ci95,qsnr_db_mean,qsnr_ci95,n_samples\n";
  for (const AggregateRow& row : result.aggregates) {
    out += heuristic_token(row.spec.heuristic);
    out += ',';
    out += row.spec.power_control ? '1' : '0';
    out += ',';
    out += metric_token(result.length_metric);
    out += ',';
    out += std::to_string(row.request_count);
    out += ',';
    out += fmt6(row.classical_load);
    out += ',';
    out += fmt6(row.blocking_ratio_mean);
    out += ',';
    out += fmt6(row.blocking_ratio_ci95);
    out += ',';
    if (row.qsnr_db_mean) {
      out += fmt6(*row.qsnr_db_mean);
      out += ',';
      out += fmt6(row.qsnr_db_ci95);
    } else {
      out += ',';
    }
    out += ',';
    out += std::to_string(row.n_samples);
    out += '\n';
  }
  return out;
}

std::string raw_csv(const SweepResult& result) {
  std::string out =
      "algorithm,power_control,length_metric,topology,replication,"
      "request_count,classical_load,blocked,total,qsnr_n,qsnr_db_mean\n";
  for (const RawRecord& rec : result.raw) {
    const AlgorithmSpec& spec = result.specs[rec.spec_index];
    out += heuristic_token(spec.heuristic);
    out += ',';
    out += spec.power_control ? '1' : '0';
    out += ',';
    out += metric_token(result.length_metric);
    out += ',';
    out += std::to_string(rec.topology);
    out += ',';
    out += std::to_string(rec.replication);
    out += ',';
    out += std::to_string(rec.request_count);
    out += ',';
    out += fmt6(rec.classical_load);
    out += ',';
    out += std::to_string(rec.blocked);
    out += ',';
    out += std::to_string(rec.total);
    out += ',';
    out += std::to_string(rec.qsnr_count);
    out += ',';
    if (rec.qsnr_count > 0)
      out += fmt6(rec.qsnr_sum / static_cast<double>(rec.qsnr_count));
    out += '\n';
  }
  return out;
}

void emit_results(const SweepResult& result, const std::string& out_dir) {
  if (result.aggregates.empty())
    throw std::runtime_error("emit_results: empty result table");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + out_dir +
                             ": " + ec.message());
  for (const auto& [name, text] :
       {std::pair<std::string, std::string>{"aggregate.csv",
                                            aggregate_csv(result)},
        {"raw.csv", raw_csv(result)}}) {
    const std::string path = out_dir + "/" + name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace qrwa
