#include "e2mac/cluster_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace e2mac {

double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<DeviceState> deploy_ppp(double sigma, double r_inner, double r_outer,
                                    std::uint64_t seed) {
  if (r_inner < 0.0 || r_outer <= r_inner)
    throw std::domain_error("deploy_ppp: need 0 <= r_inner < r_outer");
  if (sigma < 0.0) throw std::domain_error("deploy_ppp: density must be nonnegative");

  const double area = std::numbers::pi * (r_outer * r_outer - r_inner * r_inner);
  std::mt19937_64 rng(seed);
  std::poisson_distribution<int> count(sigma * area);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  const int n = sigma > 0.0 ? count(rng) : 0;
  std::vector<DeviceState> devices;
  devices.reserve(n);
  for (int i = 0; i < n; ++i) {
    // inverse-CDF radius for a uniform annulus point
    const double u = uni(rng);
    const double r = std::sqrt(r_inner * r_inner + u * (r_outer * r_outer - r_inner * r_inner));
    const double theta = 2.0 * std::numbers::pi * uni(rng);
    DeviceState dev;
    dev.id = i;
    dev.position = {r * std::cos(theta), r * std::sin(theta)};
    devices.push_back(dev);
  }
  return devices;
}

namespace {

std::vector<ClusterAssignment> attach_to_nearest_heads(std::vector<DeviceState>& devices,
                                                       const std::vector<int>& heads);

}  // namespace

std::vector<ClusterAssignment> form_voronoi_clusters(std::vector<DeviceState>& devices, double p,
                                                     std::uint64_t seed) {
  if (p <= 0.0 || p > 1.0) throw std::domain_error("form_voronoi_clusters: p must be in (0,1]");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  std::vector<int> heads;
  for (auto& dev : devices) {
    if (uni(rng) < p) {
      dev.role = Role::ch;
      heads.push_back(dev.id);
    } else {
      dev.role = Role::cm;
    }
    dev.cluster_id.reset();
  }

  if (heads.empty()) {
    for (auto& dev : devices) dev.role = Role::direct;
    return {};
  }
  return attach_to_nearest_heads(devices, heads);
}

std::vector<ClusterAssignment> form_voronoi_clusters_fixed(std::vector<DeviceState>& devices,
                                                           int n_heads, std::uint64_t seed) {
  if (n_heads < 1 || n_heads > static_cast<int>(devices.size()))
    throw std::domain_error("form_voronoi_clusters_fixed: head count out of range");
  std::vector<int> order(devices.size());
  for (std::size_t i = 0; i < devices.size(); ++i) order[i] = devices[i].id;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> heads(order.begin(), order.begin() + n_heads);
  std::sort(heads.begin(), heads.end());
  for (auto& dev : devices) {
    dev.role = Role::cm;
    dev.cluster_id.reset();
  }
  for (int h : heads) devices[h].role = Role::ch;
  return attach_to_nearest_heads(devices, heads);
}

namespace {

std::vector<ClusterAssignment> attach_to_nearest_heads(std::vector<DeviceState>& devices,
                                                       const std::vector<int>& heads) {
  // Bucket heads into a uniform grid so the nearest-head query stays cheap on
  // large deployments. Flat storage, squared distances in the hot loop.
  double min_x = std::numeric_limits<double>::max(), min_y = min_x;
  double max_x = std::numeric_limits<double>::lowest(), max_y = max_x;
  for (const auto& dev : devices) {
    min_x = std::min(min_x, dev.position.x);
    max_x = std::max(max_x, dev.position.x);
    min_y = std::min(min_y, dev.position.y);
    max_y = std::max(max_y, dev.position.y);
  }
  const double span_x = std::max(max_x - min_x, 1e-9);
  const double span_y = std::max(max_y - min_y, 1e-9);
  const int grid = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(heads.size()))));
  const double cell_x = span_x / grid, cell_y = span_y / grid;
  const double min_cell = std::min(cell_x, cell_y);

  auto cell_ix = [&](const Vec2& pos) {
    return std::clamp(static_cast<int>((pos.x - min_x) / cell_x), 0, grid - 1);
  };
  auto cell_iy = [&](const Vec2& pos) {
    return std::clamp(static_cast<int>((pos.y - min_y) / cell_y), 0, grid - 1);
  };

  const std::size_t n_cells = static_cast<std::size_t>(grid) * grid;
  std::vector<int> cell_count(n_cells + 1, 0);
  for (int h : heads)
    ++cell_count[static_cast<std::size_t>(cell_ix(devices[h].position)) * grid +
                 cell_iy(devices[h].position) + 1];
  for (std::size_t i = 1; i <= n_cells; ++i) cell_count[i] += cell_count[i - 1];
  std::vector<int> cell_items(heads.size());
  {
    std::vector<int> cursor(cell_count.begin(), cell_count.end() - 1);
    // heads are scanned in ascending id order, so each cell's items stay sorted
    for (int h : heads)
      cell_items[cursor[static_cast<std::size_t>(cell_ix(devices[h].position)) * grid +
                        cell_iy(devices[h].position)]++] = h;
  }

  auto nearest_head = [&](const Vec2& pos) {
    const int cx = cell_ix(pos), cy = cell_iy(pos);
    int best = -1;
    double best_d2 = std::numeric_limits<double>::max();
    auto scan_cell = [&](int ix, int iy) {
      const std::size_t c = static_cast<std::size_t>(ix) * grid + iy;
      for (int k = cell_count[c]; k < cell_count[c + 1]; ++k) {
        const int h = cell_items[k];
        const double dx = pos.x - devices[h].position.x;
        const double dy = pos.y - devices[h].position.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2 || (d2 == best_d2 && h < best)) {
          best_d2 = d2;
          best = h;
        }
      }
    };
    for (int ring = 0; ring < 2 * grid; ++ring) {
      const int x_lo = cx - ring, x_hi = cx + ring;
      const int y_lo = cy - ring, y_hi = cy + ring;
      if (ring == 0) {
        scan_cell(cx, cy);
      } else {
        for (int ix = std::max(0, x_lo); ix <= std::min(grid - 1, x_hi); ++ix) {
          if (y_lo >= 0) scan_cell(ix, y_lo);
          if (y_hi < grid) scan_cell(ix, y_hi);
        }
        for (int iy = std::max(0, y_lo + 1); iy <= std::min(grid - 1, y_hi - 1); ++iy) {
          if (x_lo >= 0) scan_cell(x_lo, iy);
          if (x_hi < grid) scan_cell(x_hi, iy);
        }
      }
      if (best >= 0) {
        // every cell beyond this ring is at least (ring) * min_cell away
        const double reach = ring * min_cell;
        if (reach * reach > best_d2) break;
        if (x_lo < 0 && x_hi >= grid && y_lo < 0 && y_hi >= grid) break;
      }
    }
    return best;
  };

  std::vector<ClusterAssignment> clusters(heads.size());
  std::vector<int> head_slot(devices.size(), -1);
  for (std::size_t k = 0; k < heads.size(); ++k) {
    clusters[k].ch_id = heads[k];
    head_slot[heads[k]] = static_cast<int>(k);
    devices[heads[k]].cluster_id = heads[k];
  }
  for (auto& dev : devices) {
    if (dev.role != Role::cm) continue;
    const int h = nearest_head(dev.position);
    dev.cluster_id = h;
    clusters[head_slot[h]].member_ids.push_back(dev.id);
  }
  for (auto& cl : clusters) {
    Vec2 c = devices[cl.ch_id].position;
    for (int m : cl.member_ids) {
      c.x += devices[m].position.x;
      c.y += devices[m].position.y;
    }
    const double n = 1.0 + static_cast<double>(cl.member_ids.size());
    cl.centroid = {c.x / n, c.y / n};
  }
  return clusters;
}

}  // namespace

double mean_member_distance(double z, double sigma) {
  if (z < 1.0 || sigma <= 0.0)
    throw std::domain_error("mean_member_distance: need z >= 1 and sigma > 0");
  return std::sqrt(z / (4.0 * sigma));
}

double cluster_radius_estimate(double z, double sigma) {
  return 1.5 * mean_member_distance(z, sigma);
}

double avg_distance_to_offcenter_ch(double r, double big_r) {
  if (big_r <= 0.0 || r < 0.0 || r > big_r)
    throw std::domain_error("avg_distance_to_offcenter_ch: need 0 <= r <= R, R > 0");
  return 2.0 / 3.0 * big_r + r * r / (2.0 * big_r) -
         r * r * r * r / (32.0 * big_r * big_r * big_r);
}

double mean_pairwise_distance_disc(double r) {
  if (r < 0.0) throw std::domain_error("mean_pairwise_distance_disc: radius must be nonnegative");
  return 128.0 * r / (45.0 * std::numbers::pi);
}

void write_deployment_csv(std::ostream& os, const std::vector<DeviceState>& devices) {
  os << "id,x,y,role,cluster_id\n";
  for (const auto& dev : devices) {
    const char* role = dev.role == Role::ch ? "ch" : dev.role == Role::cm ? "cm" : "direct";
    os << dev.id << ',' << dev.position.x << ',' << dev.position.y << ',' << role << ',';
    if (dev.cluster_id) os << *dev.cluster_id;
    os << '\n';
  }
}

}  // namespace e2mac
