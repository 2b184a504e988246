#include "wpd/samplers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "wpd/rng.hpp"

namespace wpd {

namespace {

using CountMatrix = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic>;

void validate(const RunConfig& cfg) {
  if (cfg.shots < 1) throw InvalidParameter("shots must be >= 1");
  if (cfg.d_bins < 1) throw InvalidParameter("d_bins must be >= 1");
  if (!(cfg.eta >= 0.0 && cfg.eta <= 1.0)) {
    throw InvalidParameter("eta must lie in [0, 1]");
  }
  if (cfg.threads < 1) throw InvalidParameter("threads must be >= 1");
}

// Dense count accumulator that grows geometrically with the observed counts.
class GrowingCounts {
 public:
  void add(int i, int j) {
    if (i >= counts_.rows() || j >= counts_.cols()) {
      const auto rows = std::max<Eigen::Index>(2 * (i + 1), counts_.rows());
      const auto cols = std::max<Eigen::Index>(2 * (j + 1), counts_.cols());
      CountMatrix bigger = CountMatrix::Zero(rows, cols);
      bigger.topLeftCorner(counts_.rows(), counts_.cols()) = counts_;
      counts_ = std::move(bigger);
    }
    ++counts_(i, j);
  }

  void merge_into(CountMatrix& total) const {
    if (counts_.rows() > total.rows() || counts_.cols() > total.cols()) {
      const auto rows = std::max(counts_.rows(), total.rows());
      const auto cols = std::max(counts_.cols(), total.cols());
      CountMatrix bigger = CountMatrix::Zero(rows, cols);
      bigger.topLeftCorner(total.rows(), total.cols()) = total;
      total = std::move(bigger);
    }
    total.topLeftCorner(counts_.rows(), counts_.cols()) += counts_;
  }

 private:
  CountMatrix counts_ = CountMatrix::Zero(8, 8);
};

// Trim trailing all-zero rows/columns so histogram files do not depend on the
// growth schedule.
void shrink_to_content(CountMatrix& counts) {
  Eigen::Index rows = 1, cols = 1;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
      if (counts(i, j) != 0) {
        rows = std::max(rows, i + 1);
        cols = std::max(cols, j + 1);
      }
    }
  }
  counts = CountMatrix(counts.topLeftCorner(rows, cols));
}

// Runs shot_fn(rng, shot_index) for every shot index, partitioned across
// cfg.threads workers; per-shot streams keep the result partition-invariant.
template <typename PerShot>
void run_shots(const RunConfig& cfg, const PerShot& shot_fn) {
  const std::uint64_t shots = cfg.shots;
  const unsigned workers =
      unsigned(std::min<std::uint64_t>(cfg.threads, shots));
  if (workers <= 1) {
    for (std::uint64_t s = 0; s < shots; ++s) {
      ShotRng rng(cfg.seed, s);
      shot_fn(rng, s, 0);
    }
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::uint64_t lo = shots * w / workers;
      const std::uint64_t hi = shots * (w + 1) / workers;
      for (std::uint64_t s = lo; s < hi; ++s) {
        ShotRng rng(cfg.seed, s);
        shot_fn(rng, s, w);
      }
    });
  }
  for (auto& t : pool) t.join();
}

int count_clicks(ShotRng& rng, int photons, int d_bins) {
  std::uint64_t occupied = 0;
  for (int i = 0; i < photons; ++i) occupied |= std::uint64_t(1) << rng.below(d_bins);
  return int(std::popcount(occupied));
}

struct Cdf {
  std::vector<double> cumulative;
  double total = 0.0;

  std::size_t draw(double u) const {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(),
                                     u * total);
    return std::size_t(std::min<std::ptrdiff_t>(
        it - cumulative.begin(), std::ptrdiff_t(cumulative.size()) - 1));
  }
};

Cdf build_cdf(const double* weights, std::size_t n) {
  Cdf cdf;
  cdf.cumulative.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw InvalidParameter("negative weight");
    acc += weights[i];
    cdf.cumulative[i] = acc;
  }
  if (acc <= 0.0) throw InvalidParameter("weights must not all vanish");
  cdf.total = acc;
  return cdf;
}

}  // namespace

JointHistogram sample_quantum_shots(const JointNumberDistribution& dist,
                                    const RunConfig& cfg) {
  validate(cfg);
  const double tail = tail_mass(dist);
  if (tail > cfg.tau) {
    throw TruncationTooSmall("distribution tail mass " + std::to_string(tail) +
                             " exceeds guard " + std::to_string(cfg.tau));
  }
  const int n = dist.n_max();
  const int d = cfg.d_bins;
  if (d > 64) throw InvalidParameter("d_bins must be <= 64");

  // Row-major flattening of p(n_A, n_B).
  std::vector<double> flat(std::size_t(n + 1) * std::size_t(n + 1));
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      flat[std::size_t(a) * std::size_t(n + 1) + std::size_t(b)] =
          dist.probs(a, b);
    }
  }
  const Cdf cdf = build_cdf(flat.data(), flat.size());

  const unsigned workers = std::max(1u, cfg.threads);
  std::vector<CountMatrix> local(
      workers, CountMatrix::Zero(d + 1, d + 1));
  run_shots(cfg, [&](ShotRng& rng, std::uint64_t, unsigned w) {
    const std::size_t cell = cdf.draw(rng.uniform());
    const int n_a = int(cell / std::size_t(n + 1));
    const int n_b = int(cell % std::size_t(n + 1));
    const int k_a = count_clicks(rng, n_a, d);
    const int k_b = count_clicks(rng, n_b, d);
    ++local[w](k_a, k_b);
  });

  JointHistogram h;
  h.kind = JointHistogram::Kind::clicks;
  h.d_bins = d;
  h.counts = CountMatrix::Zero(d + 1, d + 1);
  for (const auto& part : local) h.counts += part;
  h.shots = cfg.shots;
  h.seed = cfg.seed;
  return h;
}

JointHistogram sample_classical_particles(const ParticleEnsemble& ens,
                                          const RunConfig& cfg) {
  validate(cfg);
  if (ens.settings.empty()) throw InvalidParameter("empty particle ensemble");
  std::vector<double> weights;
  weights.reserve(ens.settings.size());
  for (const auto& s : ens.settings) {
    if (s.x < 0 || s.y < 0) throw InvalidParameter("particle counts must be >= 0");
    weights.push_back(s.weight);
  }
  const Cdf cdf = build_cdf(weights.data(), weights.size());

  const unsigned workers = std::max(1u, cfg.threads);
  std::vector<GrowingCounts> local(workers);
  run_shots(cfg, [&](ShotRng& rng, std::uint64_t, unsigned w) {
    const auto& s = ens.settings[cdf.draw(rng.uniform())];
    const int survivors = rng.binomial(s.x + s.y, cfg.eta);
    const int m = rng.binomial(survivors, 0.5);
    local[w].add(m, survivors - m);
  });

  JointHistogram h;
  h.kind = JointHistogram::Kind::counts;
  h.d_bins = 0;
  h.counts = CountMatrix::Zero(1, 1);
  for (const auto& part : local) part.merge_into(h.counts);
  shrink_to_content(h.counts);
  h.shots = cfg.shots;
  h.seed = cfg.seed;
  return h;
}

JointHistogram sample_classical_waves(const WaveEnsemble& ens,
                                      const RunConfig& cfg) {
  validate(cfg);
  const Complex phase = std::polar(1.0, cfg.theta);
  const Complex phase_conj = std::conj(phase);

  const std::vector<WaveSetting>* settings =
      std::get_if<std::vector<WaveSetting>>(&ens.input);
  Cdf cdf;
  double nbar = 0.0;
  if (settings) {
    if (settings->empty()) throw InvalidParameter("empty wave ensemble");
    std::vector<double> weights;
    weights.reserve(settings->size());
    for (const auto& s : *settings) weights.push_back(s.weight);
    cdf = build_cdf(weights.data(), weights.size());
  } else {
    nbar = std::get<ThermalAmplitudes>(ens.input).nbar;
    if (!(nbar >= 0.0)) throw InvalidParameter("nbar must be >= 0");
  }

  const unsigned workers = std::max(1u, cfg.threads);
  std::vector<GrowingCounts> local(workers);
  run_shots(cfg, [&](ShotRng& rng, std::uint64_t, unsigned w) {
    Complex x, y;
    if (settings) {
      const auto& s = (*settings)[cdf.draw(rng.uniform())];
      x = s.x;
      y = s.y;
    } else {
      const double scale = std::sqrt(nbar / 2.0);
      x = Complex(scale * rng.normal(), scale * rng.normal());
      y = Complex(scale * rng.normal(), scale * rng.normal());
    }
    const Complex x_out = (x + phase * y) / std::sqrt(2.0);
    const Complex y_out = (y - phase_conj * x) / std::sqrt(2.0);
    const int m = rng.poisson(cfg.eta * std::norm(x_out));
    const int n = rng.poisson(cfg.eta * std::norm(y_out));
    local[w].add(m, n);
  });

  JointHistogram h;
  h.kind = JointHistogram::Kind::counts;
  h.d_bins = 0;
  h.counts = CountMatrix::Zero(1, 1);
  for (const auto& part : local) part.merge_into(h.counts);
  shrink_to_content(h.counts);
  h.shots = cfg.shots;
  h.seed = cfg.seed;
  return h;
}

}  // namespace wpd
