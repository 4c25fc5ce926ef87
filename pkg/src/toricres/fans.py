"""Constructors for the standard fans and substack inclusions used throughout."""

from __future__ import annotations

import itertools
from typing import Sequence

from .core import LatticeMap, StackyFan, StackyMorphism, product_stacky_fan


def variety_fan(rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]], names=None) -> StackyFan:
    """Fan presented as a toric variety (beta = identity)."""
    n = len(rays[0]) if rays else 0
    return StackyFan.build(n, n, LatticeMap.identity(n), rays, cones, names)


def affine_space(n: int) -> StackyFan:
    rays = [[int(i == j) for j in range(n)] for i in range(n)]
    return variety_fan(rays, [list(range(n))] if n else [], [f"x{i}" for i in range(n)])


def projective_space(n: int) -> StackyFan:
    """P^n with rays e_1, ..., e_n, -(e_1 + ... + e_n)."""
    rays = [[int(i == j) for j in range(n)] for i in range(n)] + [[-1] * n]
    cones = [c for c in itertools.combinations(range(n + 1), n)]
    return variety_fan(rays, cones, [f"x{i}" for i in range(n + 1)])


def hirzebruch(b: int) -> StackyFan:
    """F_b with rays (1,0), (0,1), (-1,b), (0,-1)."""
    rays = [[1, 0], [0, 1], [-1, b], [0, -1]]
    return variety_fan(rays, [[0, 1], [1, 2], [2, 3], [3, 0]], ["D1", "D2", "D3", "D4"])


def double_blowup_p2() -> StackyFan:
    """P^2 blown up at two torus-fixed points; rays ordered D1, D2, E1, D3, E2."""
    rays = [[1, 0], [0, 1], [1, 1], [-1, -1], [-1, 0]]
    # angular order: (1,0), (1,1), (0,1), (-1,0), (-1,-1)
    cones = [[0, 2], [2, 1], [1, 4], [4, 3], [3, 0]]
    return variety_fan(rays, cones, ["D1", "D2", "E1", "D3", "E2"])


def weighted_projective_line_stack(beta_row: Sequence[int] = (1, -2)) -> StackyFan:
    """[A^2 minus 0 / G_beta] on the coordinate rays with beta a 1x2 matrix."""
    return StackyFan.build(2, 1, [list(beta_row)], [[1, 0], [0, 1]], [[0], [1]], ["x0", "x1"])


def orbifold_line(order: int = 2) -> StackyFan:
    """[A^1 / (Z/order)] as L = Z, N = Z, beta = (order)."""
    return StackyFan.build(1, 1, [[order]], [[1]], [[0]], ["x0"])


def nonseparated_line() -> StackyFan:
    return StackyFan.build(2, 1, [[1, 1]], [[1, 0], [0, 1]], [[0], [1]], ["x0", "x1"])


def punctured_plane(beta_row: Sequence[Sequence[int]] | None = None) -> StackyFan:
    """A^2 minus the origin, optionally with a non-identity beta."""
    if beta_row is None:
        return StackyFan.build(2, 2, LatticeMap.identity(2), [[1, 0], [0, 1]], [[0], [1]], ["z0", "z1"])
    return StackyFan.build(2, len(beta_row), beta_row, [[1, 0], [0, 1]], [[0], [1]], ["z0", "z1"])


def point_fan() -> StackyFan:
    return StackyFan.build(0, 0, LatticeMap.zero(0, 0), [], [])


def point_inclusion(target: StackyFan) -> StackyMorphism:
    """The identity point e -> X."""
    return StackyMorphism(point_fan(), target, LatticeMap.zero(target.rank_L, 0), LatticeMap.zero(target.rank_N, 0))


def identity_morphism(f: StackyFan) -> StackyMorphism:
    return StackyMorphism(f, f, LatticeMap.identity(f.rank_L), LatticeMap.identity(f.rank_N))


def diagonal_morphism(f: StackyFan) -> StackyMorphism:
    """X -> X x X, u -> (u, u)."""
    prod = product_stacky_fan(f, f)
    Phi = LatticeMap.from_rows([[int(i % f.rank_L == j) for j in range(f.rank_L)] for i in range(2 * f.rank_L)],
                               2 * f.rank_L, f.rank_L)
    phi = LatticeMap.from_rows([[int(i % f.rank_N == j) for j in range(f.rank_N)] for i in range(2 * f.rank_N)],
                               2 * f.rank_N, f.rank_N)
    return StackyMorphism(f, prod, Phi, phi)
