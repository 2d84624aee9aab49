// Times the serial reference and OpenMP paths of the training and
// prediction kernels on a simulated 10-d problem, and checks that both paths
// agree bit for bit.
//
//   bench_kernels [n] [B] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "bcforest/correction.hpp"
#include "bcforest/ensemble.hpp"
#include "bcforest/parallel.hpp"
#include "bcforest/simulation.hpp"

using bcf::Execution;

namespace {

template <class Fn>
double seconds(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-18s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2000;
  const std::size_t trees = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 200;
  if (argc > 3) bcf::set_thread_count(std::atoi(argv[3]));

  const auto model = bcf::parse_model("sqrt10d");
  const bcf::RngSpec rng{2024};
  auto stream = bcf::derive_stream(rng, bcf::StreamRole::kTrainingData, 0);
  const auto data = bcf::generate(model, n, stream);
  const auto scheme = bcf::ResampleScheme::subsample(n / 10);
  const auto params = bcf::SplitParams::bagged(data.p());
  std::printf("n=%zu B=%zu m=%zu threads=%d\n", n, trees, scheme.m, bcf::max_threads());

  bcf::Ensemble serial, parallel;
  const double fit_s = seconds([&] { serial = bcf::fit_ensemble(data, trees, scheme, params, rng, Execution::kSerial); });
  const double fit_p = seconds([&] { parallel = bcf::fit_ensemble(data, trees, scheme, params, rng, Execution::kParallel); });

  std::vector<double> pred_s, pred_p;
  const double pred_s_t = seconds([&] { pred_s = serial.predict_rows(data, Execution::kSerial); });
  const double pred_p_t = seconds([&] { pred_p = parallel.predict_rows(data, Execution::kParallel); });
  row("fit_ensemble", fit_s, fit_p, pred_s == pred_p);
  row("predict_rows", pred_s_t, pred_p_t, pred_s == pred_p);

  bcf::OobResult oob_s, oob_p;
  const double oob_s_t = seconds([&] { oob_s = bcf::oob_residuals(serial, data, Execution::kSerial); });
  const double oob_p_t = seconds([&] { oob_p = bcf::oob_residuals(parallel, data, Execution::kParallel); });
  row("oob_residuals", oob_s_t, oob_p_t, oob_s.residuals == oob_p.residuals && oob_s.fitted == oob_p.fitted);

  bcf::Ensemble shadow_s, shadow_p;
  const double sh_s = seconds([&] { shadow_s = bcf::build_shadow(serial, data, oob_s, 2 * trees, rng, Execution::kSerial); });
  const double sh_p = seconds([&] { shadow_p = bcf::build_shadow(parallel, data, oob_p, 2 * trees, rng, Execution::kParallel); });
  row("build_shadow", sh_s, sh_p,
      shadow_s.predict_rows(data, Execution::kSerial) == shadow_p.predict_rows(data, Execution::kSerial));
  return 0;
}
