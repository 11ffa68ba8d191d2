#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include "arh1/errors.hpp"
#include "arh1/harness.hpp"

namespace arh1 {

using nlohmann::json;

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::filesystem::filesystem_error("cannot open output file", path,
                                                    std::make_error_code(std::errc::io_error));
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::filesystem::filesystem_error("write failed", path,
                                                    std::make_error_code(std::errc::io_error));
}

void write_plot(const std::vector<EfmseReport>& reports, const std::filesystem::path& path,
                double EfmseReport::*field) {
  // T -> (classical, bayes), ordered by T.
  std::map<std::size_t, std::pair<std::string, std::string>> rows;
  for (const auto& r : reports) {
    auto& row = rows[r.T];
    (r.estimator == EstimatorKind::classical ? row.first : row.second) = fmt_double(r.*field);
  }
  auto out = open_output(path);
  out << "T,classical,bayes,one_over_T\n";
  for (const auto& [T, row] : rows) {
    out << T << ',' << row.first << ',' << row.second << ','
        << fmt_double(1.0 / static_cast<double>(T)) << '\n';
  }
  finish(out, path);
}

}  // namespace

json report_to_json(const EfmseReport& r) {
  json example = r.example == "custom" ? json(r.example) : json(std::stoi(r.example));
  return {
      {"example", example},
      {"T", r.T},
      {"N", r.N},
      {"kT", r.kT},
      {"estimator", to_string(r.estimator)},
      {"efmse_param", r.efmse_param},
      {"efmse_pred", r.efmse_pred},
      {"t_efmse_param", r.t_efmse_param},
      {"theory_param_limit", r.theory_param_limit},
      {"theory_pred_limit", r.theory_pred_limit},
      {"ref_one_over_T", r.ref_one_over_T},
  };
}

EfmseReport report_from_json(const json& j) {
  EfmseReport r;
  const json& ex = j.at("example");
  r.example = ex.is_string() ? ex.get<std::string>() : std::to_string(ex.get<int>());
  r.T = j.at("T").get<std::size_t>();
  r.N = j.at("N").get<std::size_t>();
  r.kT = j.at("kT").get<std::size_t>();
  r.estimator = estimator_from_string(j.at("estimator").get<std::string>());
  r.efmse_param = j.at("efmse_param").get<double>();
  r.efmse_pred = j.at("efmse_pred").get<double>();
  r.t_efmse_param = j.at("t_efmse_param").get<double>();
  r.theory_param_limit = j.at("theory_param_limit").get<double>();
  r.theory_pred_limit = j.at("theory_pred_limit").get<double>();
  r.ref_one_over_T = j.at("ref_one_over_T").get<double>();
  return r;
}

std::vector<EfmseReport> read_reports_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  const json doc = json::parse(in);
  std::vector<EfmseReport> out;
  for (const auto& item : doc) out.push_back(report_from_json(item));
  return out;
}

std::vector<std::filesystem::path> emit_reports(const std::vector<EfmseReport>& reports,
                                                const std::vector<OutputFormat>& formats,
                                                const std::filesystem::path& output_dir) {
  if (reports.empty()) throw ValidationError("no reports to emit");
  std::filesystem::create_directories(output_dir);
  std::vector<std::filesystem::path> written;

  for (OutputFormat format : formats) {
    if (format == OutputFormat::csv) {
      const auto path = output_dir / "efmse.csv";
      auto out = open_output(path);
      out << kEfmseCsvHeader << '\n';
      for (const auto& r : reports) {
        out << r.example << ',' << r.T << ',' << r.N << ',' << r.kT << ',' << to_string(r.estimator)
            << ',' << fmt_double(r.efmse_param) << ',' << fmt_double(r.efmse_pred) << ','
            << fmt_double(r.t_efmse_param) << ',' << fmt_double(r.theory_param_limit) << ','
            << fmt_double(r.theory_pred_limit) << ',' << fmt_double(r.ref_one_over_T) << '\n';
      }
      finish(out, path);
      written.push_back(path);
    } else {
      const auto path = output_dir / "efmse.json";
      json doc = json::array();
      for (const auto& r : reports) doc.push_back(report_to_json(r));
      auto out = open_output(path);
      out << doc.dump(2) << '\n';
      finish(out, path);
      written.push_back(path);
    }
  }

  const auto param_path = output_dir / "plot_param.csv";
  write_plot(reports, param_path, &EfmseReport::efmse_param);
  written.push_back(param_path);
  const auto pred_path = output_dir / "plot_pred.csv";
  write_plot(reports, pred_path, &EfmseReport::efmse_pred);
  written.push_back(pred_path);
  return written;
}

}  // namespace arh1
