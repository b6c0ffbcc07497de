#include "mvcca/metrics.hpp"

#include <cstdio>
#include <fstream>

#include "json_conv.hpp"
#include "mvcca/hash.hpp"

namespace mvcca {

void write_metrics_jsonl(const std::filesystem::path& file,
                         const std::vector<MetricRecord>& history, uint64_t config_hash) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write " + tmp.string());
    out << json{{"type", "meta"}, {"format_version", 1}, {"config_hash", hash_hex(config_hash)}}
               .dump()
        << "\n";
    for (const MetricRecord& rec : history) {
      json j{{"epoch", rec.epoch},
             {"corr", rec.corr_value},
             {"nr_losses", rec.nr_losses}};
      if (rec.diag) j["diag"] = to_json(*rec.diag);
      out << j.dump() << "\n";
    }
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::vector<MetricRecord> read_metrics_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file.string());
  std::vector<MetricRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      if (j.contains("type") && j.at("type") == "meta") continue;
      MetricRecord rec;
      rec.epoch = j.at("epoch").get<int>();
      rec.corr_value = j.at("corr").get<double>();
      rec.nr_losses = j.at("nr_losses").get<std::vector<double>>();
      if (j.contains("diag")) rec.diag = diagnostics_from_json(j.at("diag"));
      out.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw ParseError(file.string() + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_summary_csv(const std::filesystem::path& file, const std::vector<SummaryRow>& rows,
                       uint64_t config_hash) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write " + tmp.string());
    out << "# config_hash=" << hash_hex(config_hash) << "\n";
    out << "method,common_rate,epoch,mean_r2,r2_std,corr,nesum_mean,recon_mean,"
           "denoise_mean,corr_with_noise_mean\n";
    for (const SummaryRow& r : rows) {
      out << r.method << ',' << r.common_rate << ',' << r.epoch << ','
          << fmt_double(r.mean_r2) << ',' << fmt_double(r.r2_std) << ','
          << fmt_double(r.corr_value) << ',' << fmt_double(r.nesum_mean) << ','
          << fmt_double(r.recon_mean) << ',' << fmt_double(r.denoise_mean) << ','
          << fmt_double(r.corr_with_noise_mean) << "\n";
    }
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file.string());
  std::vector<SummaryRow> rows;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    SummaryRow r;
    char method[64];
    double common_rate = 0.0, epoch = 0.0;
    const int got = std::sscanf(
        line.c_str(), "%63[^,],%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", method, &common_rate,
        &epoch, &r.mean_r2, &r.r2_std, &r.corr_value, &r.nesum_mean, &r.recon_mean,
        &r.denoise_mean, &r.corr_with_noise_mean);
    if (got != 10) {
      throw ParseError(file.string() + " line " + std::to_string(lineno) +
                       ": expected 10 fields, parsed " + std::to_string(got));
    }
    r.method = method;
    r.common_rate = static_cast<int>(common_rate);
    r.epoch = static_cast<int>(epoch);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mvcca
