// Copyright 2026 The kbsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kbsp/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "kbsp/kcore.hpp"
#include "kbsp/metrics_report.hpp"
#include "kbsp/oracle.hpp"

namespace kbsp::cli {

namespace {

bsp::EngineConfig engine_config(std::size_t workers, std::optional<std::size_t> partitions,
                                std::optional<std::uint64_t> max_supersteps = std::nullopt) {
  bsp::EngineConfig cfg;
  cfg.workers = workers;
  cfg.partitions = partitions.value_or(workers);
  cfg.max_supersteps = max_supersteps;
  return cfg;
}

io::Graph load_graph(const std::filesystem::path& path) {
  return io::normalize(io::load_edge_list(path));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io::IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw io::IoError("write failure on '" + path.string() + "'");
}

// Maps the error taxonomy onto exit codes.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const bsp::NonTerminationError& e) {
    err << "nontermination: " << e.what() << " (" << e.partial().size()
        << " supersteps recorded)\n";
    return kNonTermination;
  } catch (const io::IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const report::IntegrityError& e) {
    err << "integrity error: " << e.what() << '\n';
    return kMismatch;
  } catch (const bsp::ContractViolation& e) {
    err << "contract violation: " << e.what() << '\n';
    return kMismatch;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace

CoreResult engine_decomposer(const io::Graph& g, const bsp::EngineConfig& cfg) {
  return kcore::decompose(g, cfg).core;
}

int cmd_run(const RunOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    const auto g = load_graph(opts.input);
    const auto cfg = engine_config(opts.workers, opts.partitions, opts.max_supersteps);
    kcore::DecomposeOptions dopts;
    dopts.dataset = opts.input.stem().string();
    const auto result = kcore::decompose(g, cfg, dopts);
    io::write_cores(result.core, g, opts.output);
    write_text(opts.report, report::emit_json(result.report));
    return kOk;
  });
}

int cmd_oracle(const OracleOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    const auto g = load_graph(opts.input);
    io::write_cores(oracle::peel(g), g, opts.output);
    return kOk;
  });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err,
               const Decomposer& decomposer) {
  return guarded(err, [&] {
    const auto g = load_graph(opts.input);
    const auto expected = oracle::peel(g);
    const auto actual = decomposer(g, engine_config(opts.workers, opts.partitions));
    if (actual.size() != expected.size()) {
      err << "mismatch: engine returned " << actual.size() << " values for "
          << expected.size() << " vertices\n";
      return kMismatch;
    }
    std::size_t shown = 0;
    std::size_t differing = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (actual[v] == expected[v]) continue;
      ++differing;
      if (shown < 10) {
        err << "vertex " << g.original_id(v) << ": engine " << actual[v] << ", oracle "
            << expected[v] << '\n';
        ++shown;
      }
    }
    if (differing > 0) {
      err << "mismatch: " << differing << " of " << g.num_vertices() << " vertices differ\n";
      return kMismatch;
    }
    const Core k_max = g.num_vertices() == 0 ? 0 : oracle::summarize(expected).k_max;
    out << "OK n=" << g.num_vertices() << " kmax=" << k_max << '\n';
    return kOk;
  });
}

int cmd_bench(const BenchOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.inputs.empty()) throw std::invalid_argument("no inputs");
    if (opts.workers_list.empty()) throw std::invalid_argument("empty workers list");
    if (opts.repeat == 0) throw std::invalid_argument("repeat must be >= 1");

    std::ofstream csv(opts.out, std::ios::binary | std::ios::trunc);
    if (!csv) throw io::IoError("cannot open '" + opts.out.string() + "' for writing");
    csv << report::kBenchCsvHeader << '\n' << std::flush;

    for (const auto& input : opts.inputs) {
      const auto g = load_graph(input);
      kcore::DecomposeOptions dopts;
      dopts.dataset = input.stem().string();
      for (std::size_t workers : opts.workers_list) {
        const auto cfg = engine_config(workers, std::nullopt);
        for (std::size_t rep = 0; rep < opts.repeat; ++rep) {
          const auto result = kcore::decompose(g, cfg, dopts);
          const report::BenchRow row{dopts.dataset,          cfg.workers,
                                     cfg.partitions,         rep,
                                     result.report.wall_ms,  result.report.supersteps,
                                     result.report.total_messages};
          csv << report::bench_csv_line(row) << std::flush;
          if (!csv) throw io::IoError("write failure on '" + opts.out.string() + "'");
        }
      }
    }
    return kOk;
  });
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-core decomposition on an in-process BSP engine", "kcore"};
  app.require_subcommand(1, 1);

  RunOptions run_opts;
  std::optional<std::size_t> run_partitions;
  auto* run = app.add_subcommand("run", "decompose with the vertex-centric engine");
  run->add_option("--input", run_opts.input, "SNAP edge list")->required();
  run->add_option("--output", run_opts.output, "core output (id<TAB>core)")->required();
  run->add_option("--report", run_opts.report, "JSON run report")->required();
  run->add_option("--workers", run_opts.workers, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--partitions", run_partitions, "partitions (default: workers)")
      ->check(CLI::PositiveNumber);
  run->add_option("--max-supersteps", run_opts.max_supersteps, "superstep cap")
      ->check(CLI::PositiveNumber);

  OracleOptions oracle_opts;
  auto* orc = app.add_subcommand("oracle", "decompose with sequential peeling");
  orc->add_option("--input", oracle_opts.input, "SNAP edge list")->required();
  orc->add_option("--output", oracle_opts.output, "core output (id<TAB>core)")->required();

  VerifyOptions verify_opts;
  std::optional<std::size_t> verify_partitions;
  auto* ver = app.add_subcommand("verify", "compare engine cores against the peeling oracle");
  ver->add_option("--input", verify_opts.input, "SNAP edge list")->required();
  ver->add_option("--workers", verify_opts.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  ver->add_option("--partitions", verify_partitions, "partitions (default: workers)")
      ->check(CLI::PositiveNumber);

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "runtime sweep over worker counts");
  bench->add_option("--inputs", bench_opts.inputs, "SNAP edge lists")->required();
  bench->add_option("--workers-list", bench_opts.workers_list, "e.g. 1,2,4,8")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--repeat", bench_opts.repeat, "repeats per configuration")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_opts.out, "CSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (*run) {
    run_opts.partitions = run_partitions;
    return cmd_run(run_opts, err);
  }
  if (*orc) return cmd_oracle(oracle_opts, err);
  if (*ver) {
    verify_opts.partitions = verify_partitions;
    return cmd_verify(verify_opts, out, err);
  }
  return cmd_bench(bench_opts, err);
}

}  // namespace kbsp::cli
