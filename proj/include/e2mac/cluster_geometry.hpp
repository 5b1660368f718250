#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "e2mac/lifetime_model.hpp"

namespace e2mac {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

enum class Role { ch, cm, direct };

struct DeviceState {
  int id = 0;
  Vec2 position;
  double energy = 0.0;
  Role role = Role::direct;
  std::optional<int> cluster_id;
  TrafficProfile traffic;
};

struct ClusterAssignment {
  int ch_id = 0;
  std::vector<int> member_ids;  // non-CH devices attached to ch_id
  Vec2 centroid;                // mean position over CH plus members
};

// Poisson deployment on the annulus [r_inner, r_outer). Deterministic per seed.
std::vector<DeviceState> deploy_ppp(double sigma, double r_inner, double r_outer,
                                    std::uint64_t seed);

// Each device becomes a CH independently with probability p; the rest join the
// nearest CH (ties to the lower CH id). With zero CHs drawn all devices go direct.
// Roles and cluster ids are written back into `devices`.
std::vector<ClusterAssignment> form_voronoi_clusters(std::vector<DeviceState>& devices, double p,
                                                     std::uint64_t seed);

// Broadcast-count variant: exactly n_heads devices (uniform without
// replacement) announce themselves as CHs, the rest join the nearest one.
std::vector<ClusterAssignment> form_voronoi_clusters_fixed(std::vector<DeviceState>& devices,
                                                           int n_heads, std::uint64_t seed);

// sqrt(z / 4 sigma): mean member-to-head distance for average cluster size z.
double mean_member_distance(double z, double sigma);

// (3/2) sqrt(z / 4 sigma): circle-equivalent cluster radius.
double cluster_radius_estimate(double z, double sigma);

// Mean distance from a uniform point in a disc of radius big_r to a point at
// offset r from the centre: 2R/3 + r^2/(2R) - r^4/(32 R^3).
double avg_distance_to_offcenter_ch(double r, double big_r);

// 128 r / (45 pi): mean distance between two uniform points in a disc.
double mean_pairwise_distance_disc(double r);

// Snapshot export: id, x, y, role, cluster_id (header included).
void write_deployment_csv(std::ostream& os, const std::vector<DeviceState>& devices);

}  // namespace e2mac
