#include "treepgd/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "treepgd/errors.hpp"
#include "treepgd/io.hpp"

namespace treepgd {

Graph make_lattice(const LatticeSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw ParameterError("lattice dimensions must be >= 1");
  const int p = spec.rows * spec.cols;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(spec.rows) * (spec.cols - 1) +
                static_cast<std::size_t>(spec.cols) * (spec.rows - 1));
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const int v = r * spec.cols + c;
      if (c + 1 < spec.cols) edges.push_back({v, v + 1});
      if (r + 1 < spec.rows) edges.push_back({v, v + spec.cols});
    }
  }
  return Graph(p, std::move(edges));
}

namespace {

TruthImage finish_truth(const LatticeSpec& spec, std::vector<double> theta) {
  Graph g = make_lattice(spec);
  TruthImage t;
  t.gradient_sparsity = gradient_sparsity(g, theta, 0.0);
  t.theta = std::move(theta);
  return t;
}

}  // namespace

TruthImage make_truth_image(const LatticeSpec& spec) {
  const int R = spec.rows, C = spec.cols;
  std::vector<double> theta(static_cast<std::size_t>(R) * C, 0.0);
  auto fill_rect = [&](double r0, double r1, double c0, double c1, double value) {
    const int ra = static_cast<int>(std::floor(r0 * R));
    const int rb = static_cast<int>(std::floor(r1 * R));
    const int ca = static_cast<int>(std::floor(c0 * C));
    const int cb = static_cast<int>(std::floor(c1 * C));
    for (int r = ra; r < rb && r < R; ++r)
      for (int c = ca; c < cb && c < C; ++c) theta[static_cast<std::size_t>(r) * C + c] = value;
  };
  fill_rect(0.13, 0.40, 0.13, 0.40, 0.9);
  fill_rect(0.57, 0.87, 0.50, 0.80, -0.5);
  return finish_truth(spec, std::move(theta));
}

TruthImage make_truth_image(const LatticeSpec& spec, const std::string& path) {
  std::vector<double> theta = read_vector_file(path);
  if (theta.size() != static_cast<std::size_t>(spec.rows) * spec.cols)
    throw DataError("truth image has " + std::to_string(theta.size()) + " values, lattice needs " +
                    std::to_string(static_cast<std::size_t>(spec.rows) * spec.cols));
  return finish_truth(spec, std::move(theta));
}

Dataset generate_linear_data(const std::vector<double>& theta_star, int n, double sigma,
                             Rng& rng) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (!(sigma > 0)) throw ParameterError("sigma must be positive");
  const int p = static_cast<int>(theta_star.size());
  std::vector<double> X(static_cast<std::size_t>(n) * p);
  for (double& x : X) x = rng.normal();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    const double* row = X.data() + static_cast<std::size_t>(i) * p;
    double acc = 0.0;
    for (int j = 0; j < p; ++j) acc += row[j] * theta_star[j];
    y[i] = acc + sigma * rng.normal();
  }
  return Dataset(n, p, std::move(X), std::move(y));
}

MethodSpec parse_method_spec(const std::string& text) {
  MethodSpec m;
  m.name = text;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError("bad method item '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "tree") {
        if (value == "fixed")
          m.tree_policy.mode = TreeMode::fixed_dfs;
        else if (value == "random")
          m.tree_policy.mode = TreeMode::random_dfs;
        else
          throw ParameterError("tree must be fixed or random, got '" + value + "'");
      } else if (key == "dmax") {
        m.tree_policy.d_max = std::stoi(value);
      } else if (key == "S") {
        if (value != "auto") {
          std::stringstream vs(value);
          std::string tok;
          while (std::getline(vs, tok, '|')) m.sparsity_grid.push_back(std::stoi(tok));
        }
      } else if (key == "eta") {
        m.eta = std::stod(value);
      } else if (key == "tau") {
        m.tau = std::stoi(value);
      } else if (key == "grid") {
        double lo, hi, step;
        char sep1, sep2;
        std::stringstream gs(value);
        if (!(gs >> lo >> sep1 >> hi >> sep2 >> step) || sep1 != ':' || sep2 != ':')
          throw ParameterError("grid must be lo:hi:step, got '" + value + "'");
        m.grid = GridSpec(lo, hi, step);
      } else {
        throw ParameterError("unknown method key '" + key + "'");
      }
    } catch (const ParameterError&) {
      throw;
    } catch (const std::exception&) {
      throw ParameterError("bad method value in '" + item + "'");
    }
  }
  return m;
}

namespace {

std::uint64_t task_seed(std::uint64_t seed, std::uint64_t m, std::uint64_t si, std::uint64_t rep,
                        std::uint64_t tag) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ m);
  h = splitmix64(h ^ si);
  h = splitmix64(h ^ rep);
  return splitmix64(h ^ tag);
}

double mean_finite(const std::vector<double>& v) {
  double acc = 0.0;
  int k = 0;
  for (double x : v)
    if (std::isfinite(x)) {
      acc += x;
      ++k;
    }
  return k ? acc / k : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec) {
  if (spec.replicates < 1) throw ParameterError("replicates must be >= 1");
  if (spec.methods.empty()) throw ParameterError("experiment needs at least one method");
  for (double s : spec.sigma_list)
    if (!(s > 0)) throw ParameterError("all sigma must be positive");

  const Graph g = make_lattice(spec.lattice);
  ResultTable table;
  table.truth = spec.truth_path.empty() ? make_truth_image(spec.lattice)
                                        : make_truth_image(spec.lattice, spec.truth_path);
  const int p = g.num_vertices();
  const int s_star = table.truth.gradient_sparsity;

  std::vector<std::vector<int>> sweeps(spec.methods.size());
  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    sweeps[m] = spec.methods[m].sparsity_grid;
    if (sweeps[m].empty()) sweeps[m] = {2 * s_star, 4 * s_star, 6 * s_star};
  }

  struct Task {
    std::size_t m, si;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t m = 0; m < spec.methods.size(); ++m)
    for (std::size_t si = 0; si < spec.sigma_list.size(); ++si)
      for (int rep = 0; rep < spec.replicates; ++rep) tasks.push_back({m, si, rep});

  // mse[m][si][S_idx][rep], filled concurrently into preallocated slots so
  // the result is independent of scheduling.
  std::vector<std::vector<std::vector<std::vector<double>>>> mse(spec.methods.size());
  auto runtime = mse;
  std::vector<std::vector<std::vector<std::vector<double>>>> estimates(spec.methods.size());
  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    mse[m].assign(spec.sigma_list.size(),
                  std::vector<std::vector<double>>(
                      sweeps[m].size(),
                      std::vector<double>(spec.replicates,
                                          std::numeric_limits<double>::quiet_NaN())));
    runtime[m] = mse[m];
    estimates[m].assign(spec.sigma_list.size(),
                        std::vector<std::vector<double>>(sweeps[m].size()));
  }

  auto run_task = [&](const Task& task) {
    const MethodSpec& method = spec.methods[task.m];
    Rng data_rng = Rng::stream(
        spec.seed, {task.m, task.si, static_cast<std::uint64_t>(task.rep), 0xda7aULL});
    Dataset data;
    try {
      data = generate_linear_data(table.truth.theta, spec.n, spec.sigma_list[task.si], data_rng);
    } catch (const std::exception&) {
      return;  // recorded as NaN
    }
    SquaredErrorLoss loss;
    for (std::size_t k = 0; k < sweeps[task.m].size(); ++k) {
      PgdConfig cfg;
      cfg.sparsity = sweeps[task.m][k];
      cfg.eta = method.eta;
      cfg.tau = method.tau;
      cfg.grid = method.grid;
      cfg.tree_policy = method.tree_policy;
      cfg.tree_policy.seed = task_seed(spec.seed, task.m, task.si,
                                       static_cast<std::uint64_t>(task.rep), 0x5eedULL + k);
      cfg.record_history = false;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        PgdResult result = run_tree_pgd(g, loss, data, cfg);
        const auto t1 = std::chrono::steady_clock::now();
        double err = 0.0;
        for (int v = 0; v < p; ++v) {
          const double d = result.theta[v] - table.truth.theta[v];
          err += d * d;
        }
        mse[task.m][task.si][k][task.rep] = err / p;
        runtime[task.m][task.si][k][task.rep] =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (task.rep == 0) estimates[task.m][task.si][k] = result.theta;
      } catch (const std::exception&) {
        // replicate failure stays NaN, not fatal
      }
    }
  };

  unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, tasks.size());
  if (threads <= 1) {
    for (const Task& t : tasks) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) break;
          run_task(tasks[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    const MethodSpec& method = spec.methods[m];
    for (std::size_t si = 0; si < spec.sigma_list.size(); ++si) {
      // Best S in the sweep by mean MSE; smaller S wins ties.
      std::size_t best_k = 0;
      double best_mean = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < sweeps[m].size(); ++k) {
        const double mk = mean_finite(mse[m][si][k]);
        if (std::isfinite(mk) && mk < best_mean) {
          best_mean = mk;
          best_k = k;
        }
        for (int rep = 0; rep < spec.replicates; ++rep) {
          std::ostringstream row;
          row << method.name << ',' << method.tree_policy.d_max << ','
              << (method.tree_policy.mode == TreeMode::random_dfs ? "random" : "fixed") << ','
              << sweeps[m][k] << ',' << format_double(spec.sigma_list[si]) << ',' << rep << ','
              << format_double(mse[m][si][k][rep]) << ','
              << format_double(runtime[m][si][k][rep]);
          table.csv_rows.push_back(row.str());
        }
      }
      CellResult cell;
      cell.method = method.name;
      cell.d_max = method.tree_policy.d_max;
      cell.tree_mode = method.tree_policy.mode;
      cell.sparsity = sweeps[m][best_k];
      cell.sigma = spec.sigma_list[si];
      cell.replicate_mse = mse[m][si][best_k];
      cell.replicate_runtime_ms = runtime[m][si][best_k];
      cell.mean_mse = mean_finite(cell.replicate_mse);
      double var = 0.0;
      int kf = 0;
      for (double x : cell.replicate_mse)
        if (std::isfinite(x)) {
          var += (x - cell.mean_mse) * (x - cell.mean_mse);
          ++kf;
        }
      cell.stderr_mse = kf > 1 ? std::sqrt(var / (kf - 1) / kf) : 0.0;
      cell.example_estimate = estimates[m][si][best_k];
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

void write_result_csv(const ResultTable& table, std::ostream& out) {
  out << "method,d_max,tree_mode,S,sigma,replicate,mse,runtime_ms\n";
  for (const std::string& row : table.csv_rows) out << row << '\n';
}

void write_pgm(const std::vector<double>& image, int rows, int cols, const std::string& path) {
  if (image.size() != static_cast<std::size_t>(rows) * cols)
    throw DataError("image size does not match rows*cols");
  double lo = image[0], hi = image[0];
  for (double v : image) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  out << "P2\n";
  out << "# value = " << format_double(lo) << " + gray * " << format_double(span / 255.0) << "\n";
  out << cols << ' ' << rows << "\n255\n";
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int gray =
          static_cast<int>(std::lround((image[static_cast<std::size_t>(r) * cols + c] - lo) /
                                       span * 255.0));
      out << gray << (c + 1 < cols ? ' ' : '\n');
    }
  }
}

}  // namespace treepgd
