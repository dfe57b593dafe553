#!/usr/bin/env python3
"""End-to-end demo: tune the obstruction scene once, execute the tuned plan,
and write the trajectory CSV plus an SVG rendering.

Shows the whole loop (scene -> tuner -> executor -> artifacts) at the
smallest interesting scale: one sphere squarely blocking the straight path.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from cfplan import (
    AgentCostWeights,
    PlannerConfig,
    Scene,
    SphereObstacle,
    TrajectoryCostWeights,
    WorkspaceBounds,
    bo_minimize,
    default_bounds,
    execute,
    trajectory_cost,
)
from cfplan.io import save_params, save_trajectory_csv
from cfplan.plot import save_plan_svg


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0, help="tuner seed")
    ap.add_argument("--init", type=int, default=8)
    ap.add_argument("--iters", type=int, default=24)
    ap.add_argument("--traj", default="demo_traj.csv")
    ap.add_argument("--plot", default="demo_plan.svg")
    ap.add_argument("--params", default=None, help="optional tuned-parameter JSON output")
    args = ap.parse_args()

    start = np.array([-0.4, 0.0, 0.5])
    goal = np.array([0.4, 0.0, 0.5])
    scene = Scene(
        obstacles=[SphereObstacle(center=(start + goal) / 2.0, radius=0.15)],
        start=start,
        goal=goal,
        workspace=WorkspaceBounds((-1.2, -1.2, -0.2), (1.2, 1.2, 1.2)),
    )
    cfg = PlannerConfig(horizon=20, replan_every=20, max_steps=600)
    agent_w = AgentCostWeights()
    traj_w = TrajectoryCostWeights()

    def objective(p: np.ndarray) -> float:
        return trajectory_cost(execute(scene, p, cfg, agent_w).trajectory, scene, traj_w)

    print("tuning...", file=sys.stderr)
    tuned = bo_minimize(
        objective, default_bounds(cfg.n_agents), n_init=args.init, n_iter=args.iters, seed=args.seed
    )
    result = execute(scene, tuned.best_p, cfg, agent_w)
    save_trajectory_csv(result.trajectory, args.traj)
    save_plan_svg(scene, result.trajectory, args.plot)
    if args.params:
        save_params(tuned.best_p, args.params)
    print(
        json.dumps(
            {
                "reached": result.reached,
                "steps_used": result.steps_used,
                "min_clearance": result.min_clearance,
                "best_cost": tuned.best_y,
                "traj": args.traj,
                "plot": args.plot,
            }
        )
    )
    return 0 if result.reached else 1


if __name__ == "__main__":
    raise SystemExit(main())
