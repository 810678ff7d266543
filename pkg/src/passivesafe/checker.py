"""Exhaustive reachability check of the passive-safety invariant.

Breadth-first exploration of every state reachable under every obstacle
velocity pick.  BFS makes a found counterexample minimal in ticks, which
keeps replay and human inspection cheap.  State identity deliberately
excludes the tick counter (dynamics do not depend on it, and including
it would make the terminal idle loop look like fresh states forever) but
includes the delayed obstacle view: two states whose robots have seen
different histories must not be merged.
"""
from __future__ import annotations

import hashlib
import json
import random
import time
from collections import deque
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .automata import (
    ChoiceError,
    ObstacleChoice,
    TransitionLabel,
    enumerate_obstacle_choices,
    world_step,
)
from .kinematics import is_passive_safe
from .model import (
    GridScenario,
    RobotMode,
    WorldState,
    initial_world_state,
    obstacle_to_dict,
    robot_to_dict,
    world_to_dict,
)

DEFAULT_STATE_BUDGET = 5_000_000


class TraceError(ValueError):
    """A trace failed validation during replay."""


class Outcome(str, Enum):
    HOLDS = "Holds"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, slots=True)
class Trace:
    """Replayable counterexample: initial state plus one label per step."""

    initial: WorldState
    steps: tuple[TransitionLabel, ...]


@dataclass(frozen=True, slots=True)
class SafetyVerdict:
    outcome: Outcome
    states_explored: int
    max_depth: int
    counterexample: Trace | None = None


@dataclass(frozen=True, slots=True)
class ExplorationStats:
    """Exploration bookkeeping.

    ``transitions`` counts explored edges whose target differs from the
    source; the terminal idle self-loop is not a transition.
    """

    states: int
    transitions: int
    peak_frontier: int
    max_depth: int
    wall_time_s: float


def state_key(world: WorldState):
    """Hashable identity of a state: everything except the tick."""
    return (world.robot, world.obstacles, world.prev_obstacles)


def state_digest(world: WorldState) -> str:
    """Content hash of the full state, stable across runs and processes."""
    payload = json.dumps(world_to_dict(world), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _rebuild_trace(
    scenario: GridScenario,
    choice_path: list[tuple[ObstacleChoice, ...]],
) -> Trace:
    """Re-execute a choice path from the initial state, filling labels."""
    world = initial_world_state(scenario)
    initial = world
    steps = []
    for choices in choice_path:
        before = world.robot.mode
        world = world_step(world, choices, scenario)
        steps.append(TransitionLabel(
            tick=world.tick,
            mode_before=before,
            mode_after=world.robot.mode,
            choices=choices,
            state_hash=state_digest(world),
        ))
    return Trace(initial=initial, steps=tuple(steps))


def _choice_path(parents: dict, key) -> list[tuple[ObstacleChoice, ...]]:
    path = []
    while True:
        entry = parents[key]
        if entry is None:
            break
        key, choices = entry
        path.append(choices)
    path.reverse()
    return path


class _BudgetExceeded(Exception):
    pass


def _explore(
    scenario: GridScenario,
    depth_bound: int | None,
    state_budget: int,
    check_property: bool,
):
    """Shared BFS core for check_safety and state_space_stats.

    Returns (violation_trace_or_None, states, transitions, peak_frontier,
    max_depth); raises _BudgetExceeded carrying the partial counts.
    """
    scenario.validate()
    init = initial_world_state(scenario)
    init_key = state_key(init)
    visited = {init_key}
    parents: dict = {init_key: None} if check_property else {}
    queue = deque([init])
    states = 1
    transitions = 0
    peak_frontier = 1
    max_depth = 0

    # The initial state has zero velocity and cannot violate, but keep the
    # check total rather than relying on that.
    if check_property and not is_passive_safe(init):
        return Trace(init, ()), states, transitions, peak_frontier, max_depth

    while queue:
        peak_frontier = max(peak_frontier, len(queue))
        world = queue.popleft()
        if depth_bound is not None and world.tick >= depth_bound:
            continue
        key = state_key(world)
        for choices in enumerate_obstacle_choices(world, scenario):
            successor = world_step(world, choices, scenario)
            succ_key = state_key(successor)
            if succ_key != key:
                transitions += 1
            if succ_key in visited:
                continue
            visited.add(succ_key)
            states += 1
            max_depth = max(max_depth, successor.tick)
            if check_property:
                parents[succ_key] = (key, choices)
                if not is_passive_safe(successor):
                    trace = _rebuild_trace(scenario, _choice_path(parents, succ_key))
                    return trace, states, transitions, peak_frontier, max_depth
            if states > state_budget:
                raise _BudgetExceeded(states, transitions, peak_frontier, max_depth)
            queue.append(successor)

    return None, states, transitions, peak_frontier, max_depth


def check_safety(
    scenario: GridScenario,
    depth_bound: int | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> SafetyVerdict:
    """Verify the passive-safety invariant over all reachable states.

    Holds when every reachable state (up to ``depth_bound`` ticks if
    given, else to fixpoint) is passive safe.  On a violation, returns
    the tick-minimal counterexample.  Blowing the state budget yields an
    Inconclusive verdict, never Holds.
    """
    try:
        trace, states, _, _, max_depth = _explore(
            scenario, depth_bound, state_budget, check_property=True
        )
    except _BudgetExceeded as e:
        return SafetyVerdict(
            outcome=Outcome.INCONCLUSIVE,
            states_explored=e.args[0],
            max_depth=e.args[3],
        )
    if trace is not None:
        return SafetyVerdict(
            outcome=Outcome.VIOLATED,
            states_explored=states,
            max_depth=max_depth,
            counterexample=trace,
        )
    return SafetyVerdict(outcome=Outcome.HOLDS, states_explored=states, max_depth=max_depth)


def state_space_stats(
    scenario: GridScenario,
    depth_bound: int | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> ExplorationStats:
    """Explore exactly as check_safety does, without evaluating the
    property, and report counts and wall time."""
    started = time.perf_counter()
    try:
        _, states, transitions, peak_frontier, max_depth = _explore(
            scenario, depth_bound, state_budget, check_property=False
        )
    except _BudgetExceeded as e:
        raise RuntimeError(
            f"state budget of {state_budget} exceeded after {e.args[0]} states"
        ) from e
    return ExplorationStats(
        states=states,
        transitions=transitions,
        peak_frontier=peak_frontier,
        max_depth=max_depth,
        wall_time_s=time.perf_counter() - started,
    )


def replay_trace(scenario: GridScenario, trace: Trace) -> WorldState:
    """Deterministically re-execute a trace, validating every label.

    Independent check on counterexamples: each step's choices must be
    legal for the state they are applied to and each stored state hash
    must match the recomputed one.  Returns the final state.
    """
    world = initial_world_state(scenario)
    if state_key(world) != state_key(trace.initial) or trace.initial.tick != 0:
        raise TraceError("trace initial state does not match the scenario")
    for k, label in enumerate(trace.steps):
        try:
            world = world_step(world, label.choices, scenario)
        except ChoiceError as e:
            raise TraceError(f"invalid label at step {k}: {e}") from e
        if label.state_hash and state_digest(world) != label.state_hash:
            raise TraceError(f"invalid label at step {k}: state hash mismatch")
    return world


def random_rollout(
    scenario: GridScenario, seed: int, max_ticks: int = 200
) -> int | None:
    """One seeded random obstacle policy through the world step.

    Every tick each moving obstacle draws uniformly from [1, max_vel].
    Returns the tick of the first passive-safety violation, or None.
    Stops early once the world is quiescent (robot idle at destination,
    nothing left moving).
    """
    rng = random.Random(seed)
    world = initial_world_state(scenario)
    for _ in range(max_ticks):
        choices = tuple(
            ObstacleChoice(obs.id, rng.randint(1, scenario.obstacle_by_id(obs.id).max_vel))
            for obs in world.obstacles
            if not obs.is_static
        )
        world = world_step(world, choices, scenario)
        if not is_passive_safe(world):
            return world.tick
        if not choices and world.robot.v == 0 and world.robot.x == scenario.robot_dest_cell:
            return None
    return None


# ---------------------------------------------------------------------------
# Serialization: verdict summary JSON and counterexample JSONL
# ---------------------------------------------------------------------------

def verdict_to_dict(verdict: SafetyVerdict) -> dict:
    return {
        "outcome": verdict.outcome.value,
        "statesExplored": verdict.states_explored,
        "maxDepth": verdict.max_depth,
        "counterexampleLength": (
            len(verdict.counterexample.steps) if verdict.counterexample else None
        ),
    }


def trace_to_jsonl(trace: Trace, scenario: GridScenario) -> str:
    """One JSON line per transition, preceded by the initial state.

    Step lines carry the resulting snapshots for human inspection; only
    the choices and hashes are authoritative for replay.
    """
    lines = [json.dumps({"type": "initial", **world_to_dict(trace.initial)})]
    world = trace.initial
    for label in trace.steps:
        world = world_step(world, label.choices, scenario)
        lines.append(json.dumps({
            "type": "step",
            "tick": label.tick,
            "modeBefore": label.mode_before.value,
            "modeAfter": label.mode_after.value,
            "choices": [
                {"id": c.obstacle_id, "velocity": c.velocity} for c in label.choices
            ],
            "robot": robot_to_dict(world.robot),
            "obstacles": [obstacle_to_dict(o) for o in world.obstacles],
            "stateHash": label.state_hash,
        }))
    return "\n".join(lines) + "\n"


def write_trace_jsonl(trace: Trace, scenario: GridScenario, path: str | Path) -> None:
    Path(path).write_text(trace_to_jsonl(trace, scenario))


def trace_from_jsonl(text: str) -> Trace:
    from .model import world_from_dict

    initial = None
    steps = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceError(f"trace line {lineno}: {e.msg}") from e
        kind = record.get("type")
        if kind == "initial":
            record.pop("type")
            initial = world_from_dict(record)
        elif kind == "step":
            steps.append(TransitionLabel(
                tick=record["tick"],
                mode_before=RobotMode(record["modeBefore"]),
                mode_after=RobotMode(record["modeAfter"]),
                choices=tuple(
                    ObstacleChoice(c["id"], c["velocity"]) for c in record["choices"]
                ),
                state_hash=record.get("stateHash", ""),
            ))
        else:
            raise TraceError(f"trace line {lineno}: unknown record type {kind!r}")
    if initial is None:
        raise TraceError("trace has no initial state line")
    return Trace(initial=initial, steps=tuple(steps))


def read_trace_jsonl(path: str | Path) -> Trace:
    return trace_from_jsonl(Path(path).read_text())
