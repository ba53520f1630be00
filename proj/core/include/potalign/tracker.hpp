#pragma once

#include <vector>

#include "potalign/shot.hpp"

namespace potalign {

struct TrackerParams {
    int grid_step = 5;   // seed spacing in pixels
    int traj_len = 10;   // frames per trajectory
};

// Flow-advection point tracker. Seeds points on a regular grid inside the
// foreground mask of every frame and advects them with bilinear flow lookups
// until the trajectory reaches traj_len frames, leaves the grid, or leaves
// the mask. Trajectories shorter than 2 points are dropped. An empty mask in
// a seed frame simply produces no seeds for that frame.
std::vector<Trajectory> advect_tracker(const Shot& shot, const TrackerParams& params = {});

}  // namespace potalign
