#include <chrono>
#include <cstdio>
#include <omp.h>

#include "esseek/scenario.hpp"
#include "esseek/sweep.hpp"

using namespace esseek;

namespace {

template <class Fn>
double seconds(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  const ScenarioConfig base = preset("corollary1");
  std::printf("threads available: %d\n", omp_get_max_threads());

  const auto analyze_grid = expand_grid({parse_axis("a=1.2:2.6:0.01"), parse_axis("V_c=0.001,0.01,0.1")});
  std::vector<AnalyzeRow> serial_rows, parallel_rows;
  const double ta_s = seconds([&] { serial_rows = sweep_analyze(base, analyze_grid, Execution::serial); });
  const double ta_p = seconds([&] { parallel_rows = sweep_analyze(base, analyze_grid, Execution::parallel); });
  bool same = serial_rows.size() == parallel_rows.size();
  for (std::size_t i = 0; same && i < serial_rows.size(); ++i) {
    same = serial_rows[i].hurwitz_eq1 == parallel_rows[i].hurwitz_eq1 && serial_rows[i].gamma1 == parallel_rows[i].gamma1;
  }
  std::printf("analyze sweep  points=%zu serial=%.4fs parallel=%.4fs speedup=%.2f identical=%s\n", analyze_grid.size(),
              ta_s, ta_p, ta_s / ta_p, same ? "yes" : "no");

  ScenarioConfig sim_base = base;
  sim_base.t_end = 5.0;
  const auto sim_grid = expand_grid({parse_axis("a=1.8:2.4:0.1"), parse_axis("omega=40,80")});
  std::vector<SimulateRow> s_rows, p_rows;
  const double ts_s = seconds([&] { s_rows = sweep_simulate(sim_base, sim_grid, Execution::serial); });
  const double ts_p = seconds([&] { p_rows = sweep_simulate(sim_base, sim_grid, Execution::parallel); });
  same = s_rows.size() == p_rows.size();
  for (std::size_t i = 0; same && i < s_rows.size(); ++i) same = s_rows[i].final_distance == p_rows[i].final_distance;
  std::printf("simulate sweep points=%zu serial=%.4fs parallel=%.4fs speedup=%.2f identical=%s\n", sim_grid.size(),
              ts_s, ts_p, ts_s / ts_p, same ? "yes" : "no");
  return same ? 0 : 1;
}
