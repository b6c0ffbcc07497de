#include "mvcca/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "json_conv.hpp"
#include "mvcca/hash.hpp"

namespace mvcca {

void MultiViewDataset::validate() const {
  if (views.size() < 2) throw ContractViolation("dataset needs at least two views");
  const Eigen::Index n = views[0].cols();
  for (const Matrix& v : views) {
    require_nonempty(v, "dataset view");
    if (v.cols() != n) throw ContractViolation("dataset views disagree on sample count");
  }
  if (tasks.cols() != n) throw ContractViolation("dataset tasks disagree on sample count");
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (int i : train_idx) {
    if (i < 0 || i >= n || seen[static_cast<size_t>(i)]++) {
      throw ContractViolation("dataset split indices must be disjoint and in range");
    }
  }
  for (int i : test_idx) {
    if (i < 0 || i >= n || seen[static_cast<size_t>(i)]++) {
      throw ContractViolation("dataset split indices must be disjoint and in range");
    }
  }
  for (char s : seen) {
    if (!s) throw ContractViolation("dataset splits must cover all columns");
  }
}

void write_matrix_csv(const std::filesystem::path& file, const Matrix& m,
                      const std::vector<std::string>& comments) {
  std::ofstream out(file);
  if (!out) throw Error("cannot open " + file.string() + " for writing");
  for (const std::string& c : comments) out << "# " << c << "\n";
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error("short write to " + file.string());
}

Matrix read_matrix_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    const char* p = line.c_str();
    int col = 0;
    while (true) {
      ++col;
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) {
        throw ParseError(file.string() + ": non-numeric value at row " +
                         std::to_string(lineno) + ", column " + std::to_string(col));
      }
      row.push_back(v);
      p = end;
      if (*p == ',') {
        ++p;
      } else if (*p == '\0' || *p == '\r') {
        break;
      } else {
        throw ParseError(file.string() + ": unexpected character at row " +
                         std::to_string(lineno) + ", column " + std::to_string(col));
      }
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw ParseError(file.string() + ": ragged row " + std::to_string(lineno) +
                       " has " + std::to_string(row.size()) + " values, expected " +
                       std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(file.string() + ": no numeric rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
    }
  }
  return m;
}

void save_dataset(const std::filesystem::path& dir, const MultiViewDataset& data,
                  uint64_t config_hash) {
  data.validate();
  std::filesystem::create_directories(dir);
  const std::string hash_comment = "config_hash=" + hash_hex(config_hash);

  json meta;
  meta["format_version"] = 1;
  meta["config_hash"] = hash_hex(config_hash);
  meta["source"] = data.source;
  if (data.synth) meta["synth"] = to_json(*data.synth);
  meta["tasks_file"] = "tasks.csv";
  meta["train_idx"] = data.train_idx;
  meta["test_idx"] = data.test_idx;

  json views = json::array();
  for (size_t k = 0; k < data.views.size(); ++k) {
    const std::string name = "view_" + std::to_string(k) + ".csv";
    write_matrix_csv(dir / name, data.views[k], {hash_comment});
    views.push_back(json{{"file", name},
                         {"rows", data.views[k].rows()},
                         {"cols", data.views[k].cols()}});
  }
  meta["views"] = views;
  write_matrix_csv(dir / "tasks.csv", data.tasks, {hash_comment});

  std::ofstream out(dir / "meta.json");
  if (!out) throw Error("cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << "\n";
}

MultiViewDataset load_dataset(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) throw ParseError("cannot open " + (dir / "meta.json").string());
  json meta;
  try {
    in >> meta;
  } catch (const json::exception& e) {
    throw ParseError((dir / "meta.json").string() + ": " + e.what());
  }
  MultiViewDataset data;
  try {
    data.source = meta.at("source").get<std::string>();
    if (meta.contains("synth")) data.synth = synth_config_from_json(meta.at("synth"));
    data.train_idx = meta.at("train_idx").get<std::vector<int>>();
    data.test_idx = meta.at("test_idx").get<std::vector<int>>();
    for (const json& v : meta.at("views")) {
      data.views.push_back(read_matrix_csv(dir / v.at("file").get<std::string>()));
    }
    data.tasks = read_matrix_csv(dir / meta.at("tasks_file").get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError((dir / "meta.json").string() + ": " + e.what());
  }
  data.validate();
  return data;
}

MultiViewDataset ingest(const std::vector<std::filesystem::path>& view_csvs,
                        const std::filesystem::path& task_csv, const SplitSpec& split) {
  if (view_csvs.size() < 2) throw ContractViolation("ingest needs at least two view files");
  MultiViewDataset data;
  data.source = "external";
  for (const auto& p : view_csvs) data.views.push_back(read_matrix_csv(p));
  data.tasks = read_matrix_csv(task_csv);

  const Eigen::Index n = data.views[0].cols();
  for (size_t k = 1; k < data.views.size(); ++k) {
    if (data.views[k].cols() != n) {
      throw ParseError("ingest: " + view_csvs[k].string() + " has " +
                       std::to_string(data.views[k].cols()) + " columns, expected " +
                       std::to_string(n));
    }
  }
  if (data.tasks.cols() != n) {
    throw ParseError("ingest: " + task_csv.string() + " has " +
                     std::to_string(data.tasks.cols()) + " columns, expected " +
                     std::to_string(n));
  }
  for (int i = split.train_begin; i < split.train_end; ++i) data.train_idx.push_back(i);
  for (int i = split.test_begin; i < split.test_end; ++i) data.test_idx.push_back(i);
  data.validate();
  return data;
}

}  // namespace mvcca
