#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "bcforest/experiments.hpp"
#include "bcforest/metrics.hpp"

namespace bcf {

using Json = nlohmann::ordered_json;

// "# config: {...}", the first line of every CSV the tools write.
std::string config_comment(const Json& config);

// One row per test point:
//   point,truth,bias_uncorrected,bias_corrected,var_uncorrected,var_corrected,mse_uncorrected,mse_corrected
void write_metric_csv(std::ostream& out, const MetricReport& report, const Json& config);
// {"config": ..., "summary": {bias_imp, pred_imp, var_ratio, miss_imp, ...}}; undefined values are null.
Json metric_json(const MetricReport& report, const Json& config);

// m,x,truth,uncorrected_q05,uncorrected_mean,uncorrected_q95,corrected_q05,corrected_mean,corrected_q95
void write_figure_csv(std::ostream& out, const std::vector<FigureRow>& rows, const Json& config);

// shadow_trees,mean_variance,ratio_to_previous
void write_variance_csv(std::ostream& out, const VarianceTable& table, const Json& config);

// var_y,rf_err,rfc_err,rf_imp,rfc_imp,retained,dropped
void write_cv_csv(std::ostream& out, const CvResult& result, const Json& config);

// Shortest round-trip decimal; "NA" for an empty optional.
std::string format_real(double value);
std::string format_optional(const std::optional<double>& value);

}  // namespace bcf
