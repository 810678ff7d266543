"""Ready-made benchmark scenarios.

The head-on scenario is the workbench's standard test bed: a three-lane
track with the robot in the middle lane, one obstacle approaching it
head-on, and parked obstacles spaced along both side lanes so that a
lane change never looks clear.  Whether the check holds then depends
only on the robot's assumed obstacle speed bound versus the true one.
"""
from __future__ import annotations

from .model import Assumptions, GridScenario, ObstacleSpec


def head_on_scenario(
    assumed_obstacle_max_vel: int = 3,
    true_obstacle_max_vel: int = 3,
    visual_radius: int = 30,
    buffer: int = 4,
    track_length: int = 50,
    obstacle_start: int = 40,
    obstacle_dest: int = 0,
) -> GridScenario:
    """Three lanes, one head-on mover, side lanes blocked by parked cars.

    The default buffer of 4 cells is calibrated so that, at the default
    robot top speed of 3, an assumption that covers the true obstacle
    speed is exactly sufficient: the verdict flips from Violated to
    Holds at assumed == true, and under-assumption runs leave a
    violation window wide enough that random rollouts stumble into it.
    The visual radius is generous enough that sensing never gates the
    look-ahead guard for assumptions up to 5.
    """
    side_cells = range(6, track_length - 2, 8)
    parked = [
        ObstacleSpec(id=100 + i, start_cell=cell, lane=lane, is_static=True)
        for i, (lane, cell) in enumerate(
            (lane, cell) for lane in (0, 2) for cell in side_cells
        )
    ]
    scenario = GridScenario(
        track_length_cells=track_length,
        lane_count=3,
        robot_start_cell=0,
        robot_start_lane=1,
        robot_max_vel=3,
        robot_dest_cell=track_length - 1,
        obstacles=(
            ObstacleSpec(
                id=0,
                start_cell=obstacle_start,
                lane=1,
                is_static=False,
                dest_cell=obstacle_dest,
                max_vel=true_obstacle_max_vel,
            ),
            *parked,
        ),
        assumptions=Assumptions(
            assumed_obstacle_max_vel=assumed_obstacle_max_vel,
            visual_radius=visual_radius,
            buffer=buffer,
        ),
    )
    scenario.validate()
    return scenario


def empty_scenario(track_length: int = 50, lanes: int = 1) -> GridScenario:
    """No obstacles at all: the robot just drives to the far end."""
    scenario = GridScenario(
        track_length_cells=track_length,
        lane_count=lanes,
        robot_start_cell=0,
        robot_start_lane=0,
        robot_max_vel=3,
        robot_dest_cell=track_length - 1,
        obstacles=(),
        assumptions=Assumptions(1, track_length, 1),
    )
    scenario.validate()
    return scenario


def single_lane_duel(
    assumed_obstacle_max_vel: int = 1,
    true_obstacle_max_vel: int = 3,
    track_length: int = 20,
    obstacle_start: int = 14,
    buffer: int = 1,
) -> GridScenario:
    """Small single-lane face-off, sized for brute-force cross-checks."""
    scenario = GridScenario(
        track_length_cells=track_length,
        lane_count=1,
        robot_start_cell=0,
        robot_start_lane=0,
        robot_max_vel=3,
        robot_dest_cell=track_length - 1,
        obstacles=(
            ObstacleSpec(
                id=0,
                start_cell=obstacle_start,
                lane=0,
                is_static=False,
                dest_cell=0,
                max_vel=true_obstacle_max_vel,
            ),
        ),
        assumptions=Assumptions(
            assumed_obstacle_max_vel=assumed_obstacle_max_vel,
            visual_radius=track_length,
            buffer=buffer,
        ),
    )
    scenario.validate()
    return scenario
