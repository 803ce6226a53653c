from functools import lru_cache

import ssdual as sd


@lru_cache(maxsize=None)
def ising(N, beta):
    return sd.ising_circle(N, beta)


@lru_cache(maxsize=None)
def ising_dual(N, beta):
    return sd.build_dual(ising(N, beta))


@lru_cache(maxsize=None)
def cube(n, k):
    return sd.kary_cube(sd.CubeSpec(n=n, k=k))


@lru_cache(maxsize=None)
def cube_dual(n, k):
    return sd.build_dual(cube(n, k))


@lru_cache(maxsize=None)
def cube_closed_dual(n, k):
    return sd.kary_cube_dual(sd.CubeSpec(n=n, k=k))


LATTICE_PARAMS = (
    (0.2, 0.2, 0.25, 0.25),
    (0.15, 0.3, 0.25, 0.2),
)


@lru_cache(maxsize=None)
def lattice(N, params=LATTICE_PARAMS[0]):
    l1, l2, m1, m2 = params
    return sd.lattice_walk(sd.LatticeSpec(N=N, lambda1=l1, lambda2=l2, mu1=m1, mu2=m2))


@lru_cache(maxsize=None)
def lattice_dual(N, params=LATTICE_PARAMS[0]):
    return sd.build_dual(lattice(N, params))
