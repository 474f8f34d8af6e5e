#include "sdlab/scan.hpp"

#include <algorithm>
#include <stdexcept>
#include <variant>

namespace sdlab {

namespace {

void update(GridSup& g, std::span<const double> row, std::size_t n) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (n == 1 || row[j] > g.value[j]) {
      g.value[j] = row[j];
      g.argmax[j] = n;
    }
  }
}

void add_jumps(const DistSpec& d, std::vector<double>& out) {
  if (const auto* s = std::get_if<SymmetricTwoPoint>(&d)) {
    out.push_back(s->magnitude);
  } else if (std::holds_alternative<SymmetricPM1>(d)) {
    out.push_back(1.0);
  } else if (const auto* p = std::get_if<ParetoTail>(&d)) {
    out.push_back(p->cutoff);
  } else if (const auto* c = std::get_if<CustomDist>(&d)) {
    for (const Atom& a : c->tail.atoms()) {
      if (a.magnitude > 0.0) out.push_back(a.magnitude);
    }
  }
}

}  // namespace

GridSup scan_sup(const ArraySpec& arr, const WeightScheme* w, std::size_t n_sup, std::size_t grid_size,
                 const CellVector& f) {
  if (n_sup == 0) throw std::invalid_argument("scan range must be >= 1");
  if (arr.declared_rows()) n_sup = std::min(n_sup, *arr.declared_rows());
  GridSup g;
  g.value.assign(grid_size, 0.0);
  g.argmax.assign(grid_size, 0);
  g.scan_n = n_sup;
  std::vector<double> cell(grid_size), row(grid_size);

  if (arr.is_sequence() && w == nullptr) {
    std::vector<double> prefix(grid_size, 0.0);
    for (std::size_t n = 1; n <= n_sup; ++n) {
      f(arr.sequence_term(n), cell);
      const double inv = 1.0 / static_cast<double>(n);
      for (std::size_t j = 0; j < grid_size; ++j) {
        prefix[j] += cell[j];
        row[j] = prefix[j] * inv;
      }
      update(g, row, n);
    }
    return g;
  }

  for (std::size_t n = 1; n <= n_sup; ++n) {
    const std::vector<CellRun> runs = arr.row(n);
    std::vector<WeightRun> weights;
    if (w) {
      if (w->k(n) != arr.k(n)) throw std::invalid_argument("weight and row lengths differ");
      weights = w->row(n);
    } else {
      weights = {{1, arr.k(n), 1.0 / static_cast<double>(arr.k(n))}};
    }
    std::fill(row.begin(), row.end(), 0.0);
    // Merge the two run lists over the common index range.
    std::size_t ci = 0, wi = 0, pos = 1;
    const std::size_t kn = arr.k(n);
    std::size_t evaluated_run = static_cast<std::size_t>(-1);
    while (pos <= kn) {
      const CellRun& cr = runs[ci];
      const WeightRun& wr = weights[wi];
      const std::size_t c_end = cr.first + cr.count;
      const std::size_t w_end = wr.first + wr.count;
      const std::size_t end = std::min(c_end, w_end);
      const double mass = wr.value * static_cast<double>(end - pos);
      if (mass != 0.0) {
        if (evaluated_run != ci) {
          f(cr.dist, cell);
          evaluated_run = ci;
        }
        for (std::size_t j = 0; j < grid_size; ++j) row[j] += mass * cell[j];
      }
      pos = end;
      if (pos == c_end) ++ci;
      if (pos == w_end) ++wi;
    }
    update(g, row, n);
  }
  return g;
}

Coverage scan_coverage(const ArraySpec& arr, std::size_t n_sup) {
  if (arr.declared_rows()) n_sup = std::min(n_sup, *arr.declared_rows());
  Coverage c;
  double half_max = 0.0;
  auto visit = [&](const DistSpec& d, std::size_t n) {
    const double m = max_magnitude(d);
    c.max_magnitude = std::max(c.max_magnitude, m);
    if (2 * n <= n_sup) half_max = std::max(half_max, m);
    add_jumps(d, c.jumps);
    if (!is_discrete(d)) c.all_discrete = false;
  };
  if (arr.is_sequence()) {
    for (std::size_t n = 1; n <= n_sup; ++n) visit(arr.sequence_term(n), n);
  } else {
    for (std::size_t n = 1; n <= n_sup; ++n) {
      for (const CellRun& r : arr.row(n)) visit(r.dist, n);
      if (c.jumps.size() > 4 * n_sup) {
        std::sort(c.jumps.begin(), c.jumps.end());
        c.jumps.erase(std::unique(c.jumps.begin(), c.jumps.end()), c.jumps.end());
      }
    }
  }
  std::sort(c.jumps.begin(), c.jumps.end());
  c.jumps.erase(std::unique(c.jumps.begin(), c.jumps.end()), c.jumps.end());
  c.stable = n_sup == 1 || half_max >= c.max_magnitude;
  return c;
}

}  // namespace sdlab
