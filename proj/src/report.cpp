#include "bcforest/report.hpp"

#include <charconv>
#include <ostream>

namespace bcf {

namespace {

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& value) { return value ? format_real(*value) : "NA"; }

std::string config_comment(const Json& config) { return "# config: " + config.dump(); }

void write_metric_csv(std::ostream& out, const MetricReport& report, const Json& config) {
  out << config_comment(config) << '\n';
  out << "point,truth,bias_uncorrected,bias_corrected,var_uncorrected,var_corrected,mse_uncorrected,mse_corrected\n";
  for (std::size_t t = 0; t < report.points.size(); ++t) {
    const PointStats& s = report.points[t];
    out << t << ',' << format_real(s.truth) << ',' << format_real(s.bias_uncorrected) << ','
        << format_real(s.bias_corrected) << ',' << format_real(s.var_uncorrected) << ','
        << format_real(s.var_corrected) << ',' << format_real(s.mse_uncorrected) << ','
        << format_real(s.mse_corrected) << '\n';
  }
}

Json metric_json(const MetricReport& report, const Json& config) {
  Json summary;
  summary["bias_imp"] = optional_json(report.bias_imp);
  summary["pred_imp"] = optional_json(report.pred_imp);
  summary["var_ratio"] = optional_json(report.var_ratio);
  summary["miss_imp"] = optional_json(report.miss_imp);
  summary["miss_rate_uncorrected"] = optional_json(report.miss_rate_uncorrected);
  summary["miss_rate_corrected"] = optional_json(report.miss_rate_corrected);
  summary["mean_sq_bias_uncorrected"] = report.mean_sq_bias_uncorrected;
  summary["mean_sq_bias_corrected"] = report.mean_sq_bias_corrected;
  summary["mean_var_uncorrected"] = report.mean_var_uncorrected;
  summary["mean_var_corrected"] = report.mean_var_corrected;
  summary["mean_mse_uncorrected"] = report.mean_mse_uncorrected;
  summary["mean_mse_corrected"] = report.mean_mse_corrected;
  summary["reps"] = report.reps;
  summary["test_points"] = report.points.size();
  Json doc;
  doc["config"] = config;
  doc["summary"] = summary;
  return doc;
}

void write_figure_csv(std::ostream& out, const std::vector<FigureRow>& rows, const Json& config) {
  out << config_comment(config) << '\n';
  out << "m,x,truth,uncorrected_q05,uncorrected_mean,uncorrected_q95,corrected_q05,corrected_mean,corrected_q95\n";
  for (const auto& r : rows) {
    out << r.m << ',' << format_real(r.x) << ',' << format_real(r.truth) << ',' << format_real(r.uncorrected_q05)
        << ',' << format_real(r.uncorrected_mean) << ',' << format_real(r.uncorrected_q95) << ','
        << format_real(r.corrected_q05) << ',' << format_real(r.corrected_mean) << ','
        << format_real(r.corrected_q95) << '\n';
  }
}

void write_variance_csv(std::ostream& out, const VarianceTable& table, const Json& config) {
  out << config_comment(config) << '\n';
  out << "shadow_trees,mean_variance,ratio_to_previous\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out << table.rows[i].shadow_trees << ',' << format_real(table.rows[i].mean_variance) << ','
        << (i == 0 ? std::string("NA") : format_real(table.ratio(i))) << '\n';
  }
}

void write_cv_csv(std::ostream& out, const CvResult& result, const Json& config) {
  out << config_comment(config) << '\n';
  out << "var_y,rf_err,rfc_err,rf_imp,rfc_imp,retained,dropped\n";
  out << format_real(result.var_y) << ',' << format_real(result.rf_err) << ',' << format_real(result.rfc_err) << ','
      << format_real(result.rf_imp) << ',' << format_optional(result.rfc_imp) << ',' << result.retained << ','
      << result.dropped << '\n';
}

}  // namespace bcf
