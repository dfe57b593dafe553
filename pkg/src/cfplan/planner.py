"""Predictive multi-agent planner.

A small committee of virtual agents shares the robot state.  Every agent
carries its own gains and current heuristic; at each replanning step all of
them simulate a short rollout from the current state, the cheapest rollout
(by ``agent_cost``) wins, and the executor advances with the winner's force
field until the next replan.  Integration is semi-implicit Euler with a hard
speed cap.

Random-heuristic agents reseed their generator from
``(master_seed, agent_id)`` on every rollout, so a rollout is a pure function
of its inputs and two rollouts from the same state are bitwise identical.
The executor keeps a separate stream for the random currents it consumes
while following a winning random agent.

Force evaluation is vectorized over obstacles.  It matches the scalar
force/heuristic functions to floating-point roundoff; where the scalar
repulsion raises on overlap, the executor instead clamps the surface distance
at ``RHO_MIN`` so that a penetrating state produces a huge finite escape
force rather than an exception mid-rollout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cost import AgentCostWeights, agent_cost
from .fields import RHO_MIN, AgentKinematics, GainSet, manipulability_force
from .heuristics import CurrentHeuristic, agent_heuristic, batch_currents
from .params import agent_gains, detection_radius, validate_params
from .scene import Scene, as_vec3, scene_arrays

#: per-sample clearance recorded when the scene has no obstacles
EMPTY_CLEARANCE = 1e9

_SEED_MASK = (1 << 63) - 1
_EXEC_STREAM = 0x45584543


@dataclass(frozen=True)
class PlannerConfig:
    n_agents: int = 7
    horizon: int = 50  # rollout length in integration steps
    dt: float = 0.01
    mass: float = 1.0
    replan_every: int = 5
    v_max: float = 1.0
    max_steps: int = 2000
    goal_tolerance: float = 0.03
    master_seed: int = 0
    jacobian: np.ndarray | None = None  # 3 x n arm Jacobian, None disables the pull

    def __post_init__(self):
        if self.n_agents < 1 or self.horizon < 1 or self.replan_every < 1:
            raise ValueError("n_agents, horizon and replan_every must be >= 1")
        if min(self.dt, self.mass, self.v_max, self.goal_tolerance) <= 0.0:
            raise ValueError("dt, mass, v_max and goal_tolerance must be positive")
        if self.max_steps < 0:
            raise ValueError("max_steps must be non-negative")
        if self.jacobian is not None:
            j = np.asarray(self.jacobian, dtype=float)
            if j.ndim != 2 or j.shape[0] != 3:
                raise ValueError("jacobian must have shape (3, n)")
            object.__setattr__(self, "jacobian", j)


@dataclass(frozen=True)
class Trajectory:
    """Sampled path: times (s,), positions (s, 3) and per-sample clearance
    (min surface distance over obstacles, EMPTY_CLEARANCE without any)."""

    times: np.ndarray
    positions: np.ndarray
    clearances: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).ravel()
        p = np.asarray(self.positions, dtype=float).reshape(-1, 3)
        c = np.asarray(self.clearances, dtype=float).ravel()
        if not (t.shape[0] == p.shape[0] == c.shape[0]):
            raise ValueError("times, positions and clearances must align")
        if t.shape[0] == 0:
            raise ValueError("a trajectory needs at least one sample")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", p)
        object.__setattr__(self, "clearances", c)

    def __len__(self) -> int:
        return self.times.shape[0]


@dataclass
class Agent:
    id: int  # 1-based
    heuristic: CurrentHeuristic
    gains: GainSet
    r_d: float
    state: AgentKinematics


@dataclass(frozen=True)
class PlanResult:
    trajectory: Trajectory
    reached: bool
    steps_used: int
    min_clearance: float
    best_agent_history: tuple[tuple[int, int], ...]  # (step, agent id) per replan


def integrate_step(
    kin: AgentKinematics, force, mass: float, dt: float, v_max: float
) -> AgentKinematics:
    """One semi-implicit Euler step: update velocity from the force, cap its
    norm at v_max, then advance the position with the new velocity."""
    v = kin.velocity + (dt / mass) * as_vec3(force)
    speed = float(np.linalg.norm(v))
    if speed > v_max:
        v = v * (v_max / speed)
    return AgentKinematics(kin.position + dt * v, v)


class _Geometry:
    """Scene obstacles flattened to arrays, plus each obstacle's nearest
    neighbor (needed by the obstacle-distance heuristics)."""

    __slots__ = ("centers", "radii", "nn_centers", "n")

    def __init__(self, centers: np.ndarray, radii: np.ndarray):
        self.centers = centers
        self.radii = radii
        self.n = radii.shape[0]
        self.nn_centers = _nearest_other_centers(centers) if self.n >= 2 else None

    @classmethod
    def from_scene(cls, scene: Scene) -> "_Geometry":
        return cls(*scene_arrays(scene))

    def surface(self, x: np.ndarray) -> np.ndarray:
        if self.n == 0:
            return np.zeros(0)
        return np.linalg.norm(x - self.centers, axis=1) - self.radii


def _nearest_other_centers(centers: np.ndarray, chunk: int = 512) -> np.ndarray:
    n = centers.shape[0]
    nearest = np.empty(n, dtype=np.int64)
    for s in range(0, n, chunk):
        block = centers[s : s + chunk]
        d2 = ((block[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        rows = np.arange(block.shape[0])
        d2[rows, s + rows] = np.inf
        nearest[s : s + chunk] = d2.argmin(axis=1)
    return centers[nearest]


def _manip_direction(jacobian: np.ndarray | None) -> np.ndarray | None:
    if jacobian is None:
        return None
    return manipulability_force(jacobian, GainSet(k_manip=1.0))


def _steering(
    x: np.ndarray,
    v: np.ndarray,
    surf: np.ndarray,
    geom: _Geometry,
    goal: np.ndarray,
    agent: Agent,
    rng: np.random.Generator,
    manip_pull: np.ndarray | None,
) -> np.ndarray:
    g = agent.gains
    f = g.vel_scale * g.k_p * (goal - x) - g.k_v * v
    if geom.n > 0 and (g.k_cf != 0.0 or g.k_r != 0.0):
        mask = surf <= agent.r_d
        if np.any(mask):
            idx = np.flatnonzero(mask)
            sub = geom.centers[idx]
            if g.k_cf != 0.0:
                nn = geom.nn_centers[idx] if geom.nn_centers is not None else None
                currents = batch_currents(agent.heuristic, x, v, sub, goal, nn, rng)
                cs = currents.sum(axis=0)
                f += g.k_cf * (float(v @ v) * cs - v * float(v @ cs))
            if g.k_r != 0.0:
                rho = np.maximum(surf[idx], RHO_MIN)
                diff = x - sub
                dist = np.maximum(np.linalg.norm(diff, axis=1), 1e-12)
                mag = g.k_r * (1.0 / rho - 1.0 / max(agent.r_d, RHO_MIN)) / rho**2
                f += ((diff / dist[:, None]) * mag[:, None]).sum(axis=0)
    if manip_pull is not None:
        f = f + g.k_manip * g.manip_scale * manip_pull
    return f


def _simulate(
    x0: np.ndarray,
    v0: np.ndarray,
    n_steps: int,
    geom: _Geometry,
    goal: np.ndarray,
    agent: Agent,
    cfg: PlannerConfig,
    rng: np.random.Generator,
    manip_pull: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Roll ``n_steps`` of the given agent's field from (x0, v0); returns
    positions (n_steps+1, 3) and per-sample clearances."""
    pos = np.empty((n_steps + 1, 3))
    clr = np.empty(n_steps + 1)
    x = x0.copy()
    v = v0.copy()
    surf = geom.surface(x)
    pos[0] = x
    clr[0] = surf.min() if geom.n else EMPTY_CLEARANCE
    scale = cfg.dt / cfg.mass
    for i in range(1, n_steps + 1):
        force = _steering(x, v, surf, geom, goal, agent, rng, manip_pull)
        v = v + scale * force
        speed = math.sqrt(float(v @ v))
        if speed > cfg.v_max:
            v *= cfg.v_max / speed
        x = x + cfg.dt * v
        surf = geom.surface(x)
        pos[i] = x
        clr[i] = surf.min() if geom.n else EMPTY_CLEARANCE
    return pos, clr


def make_agents(p: np.ndarray, cfg: PlannerConfig, state: AgentKinematics | None = None) -> list[Agent]:
    """Agents 1..n_agents with gains sliced out of the flat parameter vector."""
    p = validate_params(p, cfg.n_agents)
    if state is None:
        state = AgentKinematics(np.zeros(3), np.zeros(3))
    r_d = detection_radius(p)
    return [
        Agent(
            id=i + 1,
            heuristic=agent_heuristic(i + 1),
            gains=agent_gains(p, i, cfg.n_agents),
            r_d=r_d,
            state=state,
        )
        for i in range(cfg.n_agents)
    ]


def _rollout_rng(cfg: PlannerConfig, agent_id: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([cfg.master_seed & _SEED_MASK, agent_id])
    )


def rollout(
    agent: Agent,
    scene: Scene,
    cfg: PlannerConfig,
    *,
    _geom: _Geometry | None = None,
    _manip_pull: np.ndarray | None = None,
) -> Trajectory:
    """Simulate ``cfg.horizon`` steps of this agent's field from its state."""
    geom = _geom if _geom is not None else _Geometry.from_scene(scene)
    pull = _manip_pull if _manip_pull is not None else _manip_direction(cfg.jacobian)
    rng = _rollout_rng(cfg, agent.id)
    pos, clr = _simulate(
        agent.state.position,
        agent.state.velocity,
        cfg.horizon,
        geom,
        scene.goal,
        agent,
        cfg,
        rng,
        pull,
    )
    times = np.arange(cfg.horizon + 1) * cfg.dt
    return Trajectory(times, pos, clr)


def plan_step(
    agents: list[Agent],
    scene: Scene,
    cfg: PlannerConfig,
    weights: AgentCostWeights,
    *,
    _geom: _Geometry | None = None,
    _manip_pull: np.ndarray | None = None,
) -> int:
    """Roll out every agent from its current state and return the id of the
    one with the lowest agent_cost (ties go to the lowest id)."""
    geom = _geom if _geom is not None else _Geometry.from_scene(scene)
    pull = _manip_pull if _manip_pull is not None else _manip_direction(cfg.jacobian)
    arrays = (geom.centers, geom.radii)
    costs = [
        agent_cost(
            rollout(a, scene, cfg, _geom=geom, _manip_pull=pull),
            scene,
            weights,
            _arrays=arrays,
        )
        for a in agents
    ]
    return agents[int(np.argmin(costs))].id


def execute(
    scene: Scene, p: np.ndarray, cfg: PlannerConfig, weights: AgentCostWeights
) -> PlanResult:
    """Plan from scene start to goal, replanning every ``cfg.replan_every``
    steps, until the goal tolerance is met or ``cfg.max_steps`` run out.

    Deterministic: the result is a pure function of (scene, p, cfg, weights).
    """
    p = validate_params(p, cfg.n_agents)
    geom = _Geometry.from_scene(scene)
    pull = _manip_direction(cfg.jacobian)
    agents = make_agents(p, cfg)
    exec_rng = np.random.default_rng(
        np.random.SeedSequence([cfg.master_seed & _SEED_MASK, _EXEC_STREAM])
    )

    x = scene.start.astype(float).copy()
    v = np.zeros(3)
    goal = scene.goal
    pos = np.empty((cfg.max_steps + 1, 3))
    clr = np.empty(cfg.max_steps + 1)
    surf = geom.surface(x)
    pos[0] = x
    clr[0] = surf.min() if geom.n else EMPTY_CLEARANCE

    history: list[tuple[int, int]] = []
    reached = bool(np.linalg.norm(goal - x) <= cfg.goal_tolerance)
    steps_used = 0
    best = agents[0]
    scale = cfg.dt / cfg.mass
    if not reached:
        for step in range(cfg.max_steps):
            if step % cfg.replan_every == 0:
                kin = AgentKinematics(x.copy(), v.copy())
                for a in agents:
                    a.state = kin
                best_id = plan_step(
                    agents, scene, cfg, weights, _geom=geom, _manip_pull=pull
                )
                best = agents[best_id - 1]
                history.append((step, best_id))
            force = _steering(x, v, surf, geom, goal, best, exec_rng, pull)
            v = v + scale * force
            speed = math.sqrt(float(v @ v))
            if speed > cfg.v_max:
                v *= cfg.v_max / speed
            x = x + cfg.dt * v
            surf = geom.surface(x)
            steps_used = step + 1
            pos[steps_used] = x
            clr[steps_used] = surf.min() if geom.n else EMPTY_CLEARANCE
            if np.linalg.norm(goal - x) <= cfg.goal_tolerance:
                reached = True
                break

    n = steps_used + 1
    traj = Trajectory(np.arange(n) * cfg.dt, pos[:n], clr[:n])
    return PlanResult(
        trajectory=traj,
        reached=reached,
        steps_used=steps_used,
        min_clearance=float(clr[:n].min()),
        best_agent_history=tuple(history),
    )
