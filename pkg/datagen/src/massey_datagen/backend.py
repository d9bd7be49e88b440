"""Adapter interface to a computational number-theory backend.

The pairing computation needs, per imaginary quadratic field K:

  * the class group of K and of its four unramified cyclic cubic
    extensions L_x (each with a chosen Galois generator rho_x),
  * a dual basis: two ideals J of K with J^3 principal, spanning the
    3-torsion of Cl(K), each with a generator a of J^-3 held by the
    backend,
  * transfer of ideal classes i_x : Cl(K) -> Cl(L_x),
  * solving  i_x(J) + (1 - rho_x)^2 I = 0  for the class I in Cl(L_x),
  * a generator t of (i_x(J) * (1 - rho_x)^2 A)^-1 for an ideal
    representative A of I, when that ideal is principal,
  * the cube-times-unit test  N_{L_x/K}(t) = a u^3,
  * the twisted Artin symbol  rho_y^{-1}(Art_{L_y}(N_{L_x/K}(A) * J)).

Reimplementing this is out of scope; backends wrap an external system.
All handles (fields, extensions, ideals, elements) are backend-private;
callers only move them between adapter calls.
"""

from __future__ import annotations

from dataclasses import dataclass


class BackendError(Exception):
    """A backend computation failed; carries the failing step name."""

    def __init__(self, step, message):
        super().__init__(f"step {step}: {message}")
        self.step = step


class BackendUnavailable(BackendError):
    """The external system is not installed or not runnable."""

    def __init__(self, message):
        Exception.__init__(self, message)
        self.step = "startup"


@dataclass(frozen=True)
class CubicExtension:
    """An unramified cyclic cubic extension L_x/K with a chosen
    generator rho_x of its Galois group; `handle` is backend-private."""
    index: int
    handle: object


class Backend:
    """Abstract adapter; all methods raise BackendError on failure."""

    def open_field(self, d):
        """Prepare K = Q(sqrt(d)); returns a backend-private handle."""
        raise NotImplementedError

    def class_group_invariants(self, K):
        """Elementary divisors of Cl(K), ascending."""
        raise NotImplementedError

    def cubic_extensions(self, K):
        """The four unramified cyclic cubic extensions of K (for 3-rank
        2), as CubicExtension objects in a deterministic order."""
        raise NotImplementedError

    def dual_basis(self, K):
        """Two backend-private handles for ideals J with J^3 principal
        whose classes span the 3-torsion of Cl(K); the generator a of
        J^-3 is remembered by the backend."""
        raise NotImplementedError

    def transfer_class(self, L, J):
        """Coordinates of i_x(J) on the class group generators of L."""
        raise NotImplementedError

    def solve_augmentation_square(self, L, target):
        """Solutions I (coordinate vectors) of
        target + (1 - rho_x)^2 I = 0 in Cl(L), in the backend's native
        solution order."""
        raise NotImplementedError

    def pairing_generator(self, L, J, I):
        """A generator t of (i_x(J) * (1 - rho_x)^2 A)^-1, where A is
        the backend's ideal representative of the class I; None when
        that ideal is not principal."""
        raise NotImplementedError

    def norm_is_a_times_cube_unit(self, L, t, J):
        """Whether N_{L/K}(t) = a u^3 for a unit u of O_K, with a the
        stored generator of J^-3."""
        raise NotImplementedError

    def artin_symbol(self, Lx, Ly, I, J):
        """rho_y^{-1}(Art_{L_y}(N_{L_x/K}(A) * J)) in Z/3, with A the
        ideal representative of I (A omitted when I is None)."""
        raise NotImplementedError
