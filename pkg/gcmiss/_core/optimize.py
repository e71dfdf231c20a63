import numpy as np
from scipy import optimize


class OptimizationOutcome(object):
    """
    Result of minimize_with_restarts.

    Attributes
    ----------
    x : ndarray
        The best point found.
    fun : float
        Objective value at x.
    gradient_norm : float
        Max-norm of the central-difference gradient at x.
    converged : bool
        True if the gradient norm is below the tolerance, or below the stall
        tolerance when the line search could not make further progress.
    n_starts : int
        Number of starts tried.
    n_iterations : int
        Iterations of the run that produced x.
    """

    def __init__(self, x, fun, gradient_norm, converged, n_starts, n_iterations):
        self.x = x
        self.fun = fun
        self.gradient_norm = gradient_norm
        self.converged = converged
        self.n_starts = n_starts
        self.n_iterations = n_iterations


def central_gradient(fun, x, step=1e-5):
    x = np.asarray(x, dtype=float)
    gradient = np.zeros_like(x)
    for j in range(x.size):
        h = step * max(1., abs(x[j]))
        forward = x.copy()
        backward = x.copy()
        forward[j] += h
        backward[j] -= h
        gradient[j] = (fun(forward) - fun(backward)) / (2 * h)
    return gradient


def numerical_hessian(fun, x, step=1e-4):
    """Central-difference Hessian of a scalar function."""
    x = np.asarray(x, dtype=float)
    n = x.size
    h = step * np.maximum(1., np.abs(x))
    hessian = np.zeros((n, n))
    f0 = fun(x)
    for j in range(n):
        for k in range(j, n):
            if j == k:
                forward = x.copy()
                backward = x.copy()
                forward[j] += h[j]
                backward[j] -= h[j]
                hessian[j, j] = (fun(forward) - 2 * f0 + fun(backward)) / h[j]**2
            else:
                points = []
                for sj, sk in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    point = x.copy()
                    point[j] += sj * h[j]
                    point[k] += sk * h[k]
                    points.append(fun(point))
                hessian[j, k] = hessian[k, j] = (
                    points[0] - points[1] - points[2] + points[3]) / (4 * h[j] * h[k])
    return hessian


def _safe(fun):
    def wrapped(x):
        try:
            value = fun(x)
        except (np.linalg.LinAlgError, ValueError, FloatingPointError):
            return np.inf
        return value if np.isfinite(value) else np.inf
    return wrapped


def minimize_with_restarts(
        fun, x0, tol, max_iter, restarts, stall_tol, seed=0, jitter=0.1):
    """
    Quasi-Newton (BFGS, central-difference gradients) minimization. If the
    first run does not converge, up to `restarts` jittered starts are tried
    and the best converged run is kept, or the lowest objective if none
    converges.
    """
    fun = _safe(fun)
    rng = np.random.default_rng(seed)
    x0 = np.asarray(x0, dtype=float)
    best = None
    starts = [x0] + [
        x0 + jitter * rng.standard_normal(x0.size) for _ in range(restarts)]
    n_starts = 0
    for start in starts:
        n_starts += 1
        result = optimize.minimize(
            fun, start, method='BFGS', jac='3-point',
            options={'gtol': tol, 'maxiter': max_iter})
        gradient_norm = np.max(np.abs(central_gradient(fun, result.x)))
        converged = bool(np.isfinite(result.fun) and (
            gradient_norm < tol or (
                result.status == 2 and gradient_norm < stall_tol) or (
                result.success and gradient_norm < stall_tol)))
        outcome = OptimizationOutcome(
            result.x, result.fun, gradient_norm, converged, n_starts, result.nit)
        if best is None or _better(outcome, best):
            best = outcome
        if converged:
            break
    best.n_starts = n_starts
    return best


def _better(candidate, incumbent):
    if candidate.converged != incumbent.converged:
        return candidate.converged
    return candidate.fun < incumbent.fun
