"""Continuous 2-D environments: the 4-room exploration maze, a rewarded
point-goal task, and sparse/delayed reward wrappers.

All environments are deterministic given (state, action); randomness
lives in policies only. Episodes never terminate from inside the
environment; the runner truncates at a fixed episode length and tells
the wrappers via the `final` flag so delayed reward mass is conserved.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

COLLISION_INSET = 1e-6


@dataclass
class EnvStep:
    next_state: np.ndarray
    reward: float
    done: bool = False
    info: dict | None = None


@dataclass(frozen=True)
class WallRect:
    """Axis-aligned solid rectangle [x0, x1] x [y0, y1]."""

    x0: float
    x1: float
    y0: float
    y1: float

    def contains(self, x: float, y: float) -> bool:
        # strict interior: grazing contact on an edge does not count
        return self.x0 < x < self.x1 and self.y0 < y < self.y1


def four_room_walls(width: float = 100.0, height: float = 100.0,
                    thickness: float = 1.0, door_width: float = 8.0) -> tuple[WallRect, ...]:
    """Two crossing walls of the given thickness with four door gaps
    centered at (w/2, h/4), (w/2, 3h/4), (w/4, h/2), (3w/4, h/2)."""
    cx, cy = width / 2.0, height / 2.0
    ht = thickness / 2.0
    hd = door_width / 2.0
    vertical = [  # x in [cx-ht, cx+ht], y split by the two doors
        WallRect(cx - ht, cx + ht, 0.0, height / 4.0 - hd),
        WallRect(cx - ht, cx + ht, height / 4.0 + hd, 3.0 * height / 4.0 - hd),
        WallRect(cx - ht, cx + ht, 3.0 * height / 4.0 + hd, height),
    ]
    horizontal = [
        WallRect(0.0, width / 4.0 - hd, cy - ht, cy + ht),
        WallRect(width / 4.0 + hd, 3.0 * width / 4.0 - hd, cy - ht, cy + ht),
        WallRect(3.0 * width / 4.0 + hd, width, cy - ht, cy + ht),
    ]
    return tuple(vertical + horizontal)


@dataclass(frozen=True)
class MazeLayout:
    width: float = 100.0
    height: float = 100.0
    walls: tuple[WallRect, ...] = field(default_factory=four_room_walls)
    start: tuple[float, float] = (0.5, 0.5)

    def in_wall(self, x: float, y: float) -> bool:
        return any(w.contains(x, y) for w in self.walls)

    def blocked_cells(self) -> np.ndarray:
        """Boolean grid over 1x1 cells; a cell is blocked if it overlaps
        any wall with positive area."""
        nx, ny = int(self.width), int(self.height)
        blocked = np.zeros((nx, ny), dtype=bool)
        for w in self.walls:
            ix0 = max(0, int(np.floor(w.x0)))
            ix1 = min(nx, int(np.ceil(w.x1)))
            iy0 = max(0, int(np.floor(w.y0)))
            iy1 = min(ny, int(np.ceil(w.y1)))
            for ix in range(ix0, ix1):
                for iy in range(iy0, iy1):
                    # overlap area of cell [ix,ix+1]x[iy,iy+1] with the rect
                    ox = min(ix + 1.0, w.x1) - max(float(ix), w.x0)
                    oy = min(iy + 1.0, w.y1) - max(float(iy), w.y0)
                    if ox > 0.0 and oy > 0.0:
                        blocked[ix, iy] = True
        return blocked

    def validate(self) -> None:
        """Start cell wall-free and every free cell reachable from it
        (flood fill over the 1x1 grid)."""
        sx, sy = self.start
        if self.in_wall(sx, sy):
            raise ValueError("maze start position lies inside a wall")
        blocked = self.blocked_cells()
        nx, ny = blocked.shape
        start_cell = (int(sx), int(sy))
        if blocked[start_cell]:
            raise ValueError("maze start cell is blocked")
        seen = np.zeros_like(blocked)
        queue = deque([start_cell])
        seen[start_cell] = True
        while queue:
            cx, cy = queue.popleft()
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                mx, my = cx + dx, cy + dy
                if 0 <= mx < nx and 0 <= my < ny and not blocked[mx, my] and not seen[mx, my]:
                    seen[mx, my] = True
                    queue.append((mx, my))
        unreachable = int(np.sum(~blocked & ~seen))
        if unreachable:
            raise ValueError(f"{unreachable} free cells unreachable from start; "
                             "rooms are not connected")


def _segment_stop(layout_walls, width: float, height: float,
                  x: float, y: float, dx: float, dy: float) -> tuple[float, float]:
    """Move from (x, y) along (dx, dy), stopping just before the first
    wall or outer-boundary crossing (inset COLLISION_INSET along the
    motion direction). Sliding is not modeled."""
    t_hit = np.inf
    # outer boundary: time of leaving [0, width] x [0, height]
    if dx > 0.0:
        t_hit = min(t_hit, (width - x) / dx)
    elif dx < 0.0:
        t_hit = min(t_hit, -x / dx)
    if dy > 0.0:
        t_hit = min(t_hit, (height - y) / dy)
    elif dy < 0.0:
        t_hit = min(t_hit, -y / dy)
    # interior walls: slab entry times
    for w in layout_walls:
        if dx != 0.0:
            ta = (w.x0 - x) / dx
            tb = (w.x1 - x) / dx
            tx0, tx1 = (ta, tb) if ta <= tb else (tb, ta)
        else:
            if not (w.x0 < x < w.x1):
                continue
            tx0, tx1 = -np.inf, np.inf
        if dy != 0.0:
            ta = (w.y0 - y) / dy
            tb = (w.y1 - y) / dy
            ty0, ty1 = (ta, tb) if ta <= tb else (tb, ta)
        else:
            if not (w.y0 < y < w.y1):
                continue
            ty0, ty1 = -np.inf, np.inf
        t_enter = max(tx0, ty0)
        t_exit = min(tx1, ty1)
        # t_exit must be strictly positive: grazing the wall face at the
        # start point only does not block the move
        if t_enter <= t_exit and t_exit > 0.0 and t_enter < t_hit:
            t_hit = max(t_enter, 0.0)
    if t_hit > 1.0:
        return x + dx, y + dy
    norm = float(np.hypot(dx, dy))
    t_stop = max(0.0, t_hit - (COLLISION_INSET / norm if norm > 0.0 else 0.0))
    return x + t_stop * dx, y + t_stop * dy


def maze_reset(layout: MazeLayout) -> np.ndarray:
    return np.array(layout.start, dtype=np.float64)


def maze_step(layout: MazeLayout, state, action) -> EnvStep:
    """Kinematics: proposed next point is state + action with action
    clamped to [-1, 1]^2; motion stops at walls. Reward is always zero."""
    x, y = float(state[0]), float(state[1])
    dx = min(1.0, max(-1.0, float(action[0])))
    dy = min(1.0, max(-1.0, float(action[1])))
    nx, ny = _segment_stop(layout.walls, layout.width, layout.height, x, y, dx, dy)
    return EnvStep(np.array((nx, ny)), 0.0)


class ContinuousMaze:
    """Pure-exploration 4-room maze; reward identically zero."""

    state_dim = 2
    action_dim = 2

    def __init__(self, layout: MazeLayout | None = None):
        self.layout = layout if layout is not None else MazeLayout()
        self.layout.validate()
        self.state = maze_reset(self.layout)

    def reset(self) -> np.ndarray:
        self.state = maze_reset(self.layout)
        return self.state

    def step(self, action, *, final: bool = False) -> EnvStep:
        es = maze_step(self.layout, self.state, action)
        self.state = es.next_state
        return es


POINTGOAL_GOAL = (90.0, 90.0)


def pointgoal_reset() -> np.ndarray:
    return np.array((0.5, 0.5))


def pointgoal_step(state, action, goal=POINTGOAL_GOAL,
                   width: float = 100.0, height: float = 100.0) -> EnvStep:
    """Maze kinematics without interior walls; dense reward is the
    negated distance from the next point to the goal, divided by 100."""
    x, y = float(state[0]), float(state[1])
    dx = min(1.0, max(-1.0, float(action[0])))
    dy = min(1.0, max(-1.0, float(action[1])))
    nx, ny = _segment_stop((), width, height, x, y, dx, dy)
    reward = -float(np.hypot(nx - goal[0], ny - goal[1])) / 100.0
    return EnvStep(np.array((nx, ny)), reward)


class PointGoal:
    """Rewarded open-field task: start near the origin corner, dense
    negative-distance reward toward the goal at (90, 90)."""

    state_dim = 2
    action_dim = 2

    def __init__(self, goal=POINTGOAL_GOAL, width: float = 100.0, height: float = 100.0):
        self.goal = goal
        self.width = width
        self.height = height
        self.state = pointgoal_reset()

    def reset(self) -> np.ndarray:
        self.state = pointgoal_reset()
        return self.state

    def step(self, action, *, final: bool = False) -> EnvStep:
        es = pointgoal_step(self.state, action, self.goal, self.width, self.height)
        self.state = es.next_state
        return es


class SparseReward:
    """Reward 1 whenever the post-step coordinate strictly exceeds the
    threshold on the given axis, else 0; the inner reward is discarded."""

    def __init__(self, env, threshold: float, axis: int = 0):
        self.env = env
        self.threshold = float(threshold)
        self.axis = int(axis)
        self.state_dim = env.state_dim
        self.action_dim = env.action_dim

    def reset(self) -> np.ndarray:
        return self.env.reset()

    def step(self, action, *, final: bool = False) -> EnvStep:
        es = self.env.step(action, final=final)
        reward = 1.0 if es.next_state[self.axis] > self.threshold else 0.0
        return EnvStep(es.next_state, reward, es.done, es.info)


class DelayedReward:
    """Accumulates inner rewards and emits the sum every `delay` steps.

    The runner's `final` flag flushes the residual accumulator at episode
    truncation, so total emitted reward per episode equals total inner
    reward exactly.
    """

    def __init__(self, env, delay: int):
        if delay < 1:
            raise ValueError(f"delay must be >= 1, got {delay}")
        self.env = env
        self.delay = int(delay)
        self.state_dim = env.state_dim
        self.action_dim = env.action_dim
        self.accumulator = 0.0
        self.counter = 0

    def reset(self) -> np.ndarray:
        self.accumulator = 0.0
        self.counter = 0
        return self.env.reset()

    def step(self, action, *, final: bool = False) -> EnvStep:
        es = self.env.step(action, final=final)
        self.accumulator += es.reward
        self.counter += 1
        if self.counter >= self.delay or final:
            reward = self.accumulator
            self.accumulator = 0.0
            self.counter = 0
        else:
            reward = 0.0
        return EnvStep(es.next_state, reward, es.done, es.info)
