"""Executable transition relations for the robot and its obstacles.

The robot is a five-mode machine (Idle, Accelerate, Drive, Brake, Stop)
with unit acceleration and deceleration.  Moving obstacles pick a
velocity from [1, max_vel] every tick; the set of those picks is the
only nondeterminism in a world step.  Robot and obstacles advance in
lockstep, and the robot decides on the one-tick-delayed obstacle view,
so a step reads ``world.prev_obstacles`` and writes the current
``world.obstacles`` into the successor's ``prev_obstacles``.

Mode logic per tick (the target mode decides the velocity update:
entering Accelerate adds one, entering Brake sheds one, Drive holds,
Idle/Stop mean standing still):

    Idle        -> Accelerate unless already at the destination
    Accelerate  -> Brake on danger; Drive once v reaches max
    Drive       -> Brake on danger or when the destination is within
                   braking distance of the current velocity
    Brake       -> Accelerate when the braking trigger has cleared, or
                   sideways into a free adjacent lane while danger holds;
                   otherwise keep shedding speed, Stop at v = 0
    Stop        -> Idle at the destination; Accelerate once danger clears

The position then advances by the updated velocity, capped at the
destination cell.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .kinematics import braking_distance_cells, collision_danger
from .model import (
    GridScenario,
    ObstacleSnapshot,
    RobotMode,
    RobotSnapshot,
    WorldState,
)


class ChoiceError(ValueError):
    """Choice vector does not match the world it is applied to."""


@dataclass(frozen=True, slots=True)
class ObstacleChoice:
    """One moving obstacle's velocity pick for a single tick."""

    obstacle_id: int
    velocity: int


@dataclass(frozen=True, slots=True)
class TransitionLabel:
    """Record of one world step, enough to replay and explain it.

    ``state_hash`` is the digest of the state the step produced; replay
    recomputes and compares it.
    """

    tick: int
    mode_before: RobotMode
    mode_after: RobotMode
    choices: tuple[ObstacleChoice, ...]
    state_hash: str = ""


def _accelerated(v: int, vmax: int) -> tuple[RobotMode, int]:
    v = min(v + 1, vmax)
    return (RobotMode.DRIVE if v == vmax else RobotMode.ACCELERATE), v


def _braked(v: int) -> tuple[RobotMode, int]:
    v = max(v - 1, 0)
    return (RobotMode.STOP if v == 0 else RobotMode.BRAKE), v


def lane_change_possible(
    robot: RobotSnapshot, world: WorldState, scenario: GridScenario
) -> int | None:
    """Adjacent lane with no observed obstacle ahead within visual range.

    Checked on the delayed view, lower lane index wins ties, None when
    neither neighbor qualifies.
    """
    visual = scenario.assumptions.visual_radius
    for lane in (robot.lane - 1, robot.lane + 1):
        if not 0 <= lane < scenario.lane_count:
            continue
        blocked = any(
            obs.lane == lane and robot.x <= obs.x <= robot.x + visual
            for obs in world.prev_obstacles
        )
        if not blocked:
            return lane
    return None


def robot_step(
    robot: RobotSnapshot, world: WorldState, scenario: GridScenario
) -> RobotSnapshot:
    """Advance the robot one tick against the (old) world it observes."""
    danger = collision_danger(world, scenario)
    at_dest = robot.x == scenario.robot_dest_cell
    near_dest = scenario.robot_dest_cell - robot.x <= braking_distance_cells(robot.v)
    vmax = scenario.robot_max_vel
    mode, v, lane = robot.mode, robot.v, robot.lane

    if mode is RobotMode.IDLE:
        if not at_dest:
            mode, v = _accelerated(v, vmax)
    elif mode is RobotMode.ACCELERATE:
        if danger:
            mode, v = _braked(v)
        else:
            mode, v = _accelerated(v, vmax)
    elif mode is RobotMode.DRIVE:
        if danger or near_dest:
            mode, v = _braked(v)
    elif mode is RobotMode.BRAKE:
        if not danger and not near_dest:
            # The braking trigger has cleared: drive on at reduced speed.
            mode, v = _accelerated(v, vmax)
        else:
            free_lane = lane_change_possible(robot, world, scenario) if danger else None
            if free_lane is not None:
                lane = free_lane
                mode, v = _accelerated(v, vmax)
            else:
                mode, v = _braked(v)
    elif mode is RobotMode.STOP:
        if at_dest:
            mode = RobotMode.IDLE
        elif not danger:
            mode, v = _accelerated(v, vmax)

    x = min(robot.x + v, scenario.robot_dest_cell)
    return RobotSnapshot(x=x, lane=lane, v=v, mode=mode)


def enumerate_obstacle_choices(
    world: WorldState, scenario: GridScenario
) -> list[tuple[ObstacleChoice, ...]]:
    """All velocity pick vectors for the current tick.

    Cartesian product over the still-moving obstacles of [1, max_vel];
    static and arrived obstacles contribute nothing.  A world with no
    movers yields exactly one empty vector.
    """
    per_mover = [
        [ObstacleChoice(obs.id, v)
         for v in range(1, scenario.obstacle_by_id(obs.id).max_vel + 1)]
        for obs in world.obstacles
        if not obs.is_static
    ]
    return [tuple(combo) for combo in itertools.product(*per_mover)]


def _validate_choices(
    world: WorldState,
    choices: tuple[ObstacleChoice, ...],
    scenario: GridScenario,
) -> dict[int, int]:
    mover_ids = [obs.id for obs in world.obstacles if not obs.is_static]
    if [c.obstacle_id for c in choices] != mover_ids:
        raise ChoiceError(
            f"choice vector names obstacles {[c.obstacle_id for c in choices]}, "
            f"expected moving obstacles {mover_ids}"
        )
    picked = {}
    for choice in choices:
        max_vel = scenario.obstacle_by_id(choice.obstacle_id).max_vel
        if not 1 <= choice.velocity <= max_vel:
            raise ChoiceError(
                f"obstacle {choice.obstacle_id}: velocity {choice.velocity} "
                f"outside [1, {max_vel}]"
            )
        picked[choice.obstacle_id] = choice.velocity
    return picked


def world_step(
    world: WorldState,
    choices: tuple[ObstacleChoice, ...],
    scenario: GridScenario,
) -> WorldState:
    """One synchronous tick: obstacles move by their picks, the robot by
    its mode logic against the old world.  Movers clamp at their
    destination and become static there, for good."""
    picked = _validate_choices(world, choices, scenario)
    new_obstacles = []
    for obs in world.obstacles:
        if obs.is_static:
            new_obstacles.append(obs)
            continue
        x = max(obs.x - picked[obs.id], obs.dest_cell)
        new_obstacles.append(ObstacleSnapshot(
            id=obs.id, x=x, lane=obs.lane,
            is_static=x == obs.dest_cell, dest_cell=obs.dest_cell,
        ))
    robot = robot_step(world.robot, world, scenario)
    return WorldState(
        tick=world.tick + 1,
        robot=robot,
        obstacles=tuple(new_obstacles),
        prev_obstacles=world.obstacles,
    )
