"""Distance and danger computations.

On the grid the robot brakes with unit deceleration: each tick it moves
at its current velocity, then sheds one cell/tick.  A robot at velocity v
therefore needs v ticks and v + (v-1) + ... + 1 = v(v+1)/2 cells to stop.
The runtime analogue works in meters with a configurable deceleration.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import GridScenario, WorldState


@dataclass(frozen=True, slots=True)
class BrakingModel:
    """Braking parameters; the grid model always decelerates 1 cell/tick²."""

    decel_per_tick: int = 1
    decel_rate: float = 0.5   # m/s², runtime
    dt: float = 0.1           # s, runtime step

    def braking_time(self, v: float) -> float:
        """Seconds a robot at v needs to reach a standstill."""
        return v / self.decel_rate


@dataclass(frozen=True, slots=True)
class CollisionDistance:
    """The three terms of the look-ahead distance and their exact sum."""

    d_brake: float
    d_obstacle: float
    buffer: float
    total: float


def braking_distance_cells(v: int) -> int:
    """Cells covered by a robot braking from velocity v: v(v+1)/2."""
    return v * (v + 1) // 2


def ticks_to_stop(v: int) -> int:
    """Ticks a robot at velocity v needs to reach v = 0 (unit deceleration)."""
    return v


def obstacle_driving_distance_cells(v_robot: int, assumed_obs_max_vel: int) -> int:
    """Cells an obstacle at the assumed bound covers while the robot brakes."""
    return assumed_obs_max_vel * ticks_to_stop(v_robot)


def collision_distance_meters(
    v_robot: float, t_brake: float, v_obs_max: float, buffer: float
) -> CollisionDistance:
    """Runtime look-ahead distance: robot braking travel plus obstacle
    travel during the braking time plus the safety buffer."""
    d_brake = v_robot * t_brake
    d_obstacle = v_obs_max * t_brake
    return CollisionDistance(d_brake, d_obstacle, buffer, d_brake + d_obstacle + buffer)


def collision_danger(world: WorldState, scenario: GridScenario) -> bool:
    """Look-ahead guard: is braking warranted for any observed obstacle?

    Reads the one-tick-delayed obstacle view (``prev_obstacles``).  Only
    obstacles ahead of the robot on its own lane and inside the visual
    radius count.  Moving obstacles are checked against the full
    look-ahead distance at the robot's *maximum* velocity plus the
    buffer; static obstacles against the braking distance computed one
    velocity step above maximum, which builds in the margin without a
    separate buffer term.
    """
    a = scenario.assumptions
    vmax = scenario.robot_max_vel
    robot = world.robot
    for obs in world.prev_obstacles:
        if obs.lane != robot.lane:
            continue
        if not robot.x <= obs.x:
            continue
        if obs.x - robot.x > a.visual_radius:
            continue
        if obs.is_static:
            if robot.x + braking_distance_cells(vmax + 1) >= obs.x:
                return True
        else:
            reach = (robot.x
                     + braking_distance_cells(vmax)
                     + obstacle_driving_distance_cells(vmax, a.assumed_obstacle_max_vel))
            if reach >= obs.x - a.buffer:
                return True
    return False


def is_passive_safe(world: WorldState) -> bool:
    """Passive-safety predicate on the *true* world state.

    A state is unsafe exactly when some obstacle sits on the robot's lane
    in the cell directly ahead while the robot still has speed.  Contact
    at zero velocity is admissible: the robot did not cause it.
    """
    robot = world.robot
    if robot.v == 0:
        return True
    for obs in world.obstacles:
        if obs.lane == robot.lane and robot.x < obs.x <= robot.x + 1:
            return False
    return True
