"""Built-in desk-scale pools and kernel families."""

from typing import Any

from .errors import ConfigError


def _two_state(p: float) -> dict[str, Any]:
    return {
        "states": 2,
        "rows": [[1.0 - p, p], [p, 1.0 - p]],
        "emission_flip": [0.1, 0.1],
        "emission_sign": [1, -1],
    }


def _six_state_chains() -> list[dict[str, Any]]:
    n = 6
    lazy_walk = [[0.0] * n for _ in range(n)]
    jumps = [[0.0] * n for _ in range(n)]
    near_uniform = [[0.14] * n for _ in range(n)]
    for i in range(n):
        lazy_walk[i][i] = 0.5
        lazy_walk[i][(i + 1) % n] = 0.3
        lazy_walk[i][(i - 1) % n] = 0.2
        jumps[i][i] = 0.2
        jumps[i][(i + 2) % n] = 0.4
        jumps[i][(i + 3) % n] = 0.4
        near_uniform[i][i] = 0.3
    signs = [1, 1, 1, -1, -1, -1]
    return [
        {"states": n, "rows": rows, "emission_flip": [flip] * n, "emission_sign": signs}
        for rows, flip in ((lazy_walk, 0.1), (jumps, 0.15), (near_uniform, 0.2))
    ]


def get_sample_pool(name: str) -> dict[str, Any]:
    """Get a sample pool document by name."""
    match name:
        case "two-state":
            return {
                "chains": [{**_two_state(0.25), "weight": 1.0}],
                "initial": [0.5, 0.5],
            }
        case "desk":
            return {
                "chains": [
                    {**_two_state(0.25), "weight": 0.5},
                    {**_two_state(0.4), "weight": 0.5},
                ],
                "initial": [0.5, 0.5],
            }
        case "iid":
            return {
                "chains": [{**_two_state(0.5), "weight": 1.0}],
                "initial": [1.0, 0.0],
            }
        case "six-state":
            chains = _six_state_chains()
            for chain, weight in zip(chains, (0.5, 0.3, 0.2)):
                chain["weight"] = weight
            return {"chains": chains, "initial": [1.0 / 6.0] * 6}
        case _:
            raise ConfigError(
                f"unknown sample pool {name!r}; "
                "choose from two-state, desk, iid, six-state"
            )


def get_sample_kernel_family() -> dict[str, Any]:
    """Four Gaussian kernels under an L1 constraint."""
    return {
        "B": 1.0,
        "q": 1.0,
        "kernels": [
            {"kind": "gaussian", "sigma": sigma} for sigma in (0.5, 1.0, 2.0, 4.0)
        ],
    }
