"""Truncation ladders used by the verdict pipeline and the report."""

from __future__ import annotations

from .cheeger import Family, gap_certificate
from .generators import block_vertices, cusp_family_spec, gen_cusp, gen_ray_blocks


def ray_blocks_family(q: int) -> Family:
    return Family(
        name="ray-blocks",
        q=q,
        build=lambda N: gen_ray_blocks(q=q, N=N),
        witnesses=lambda D, N: [block_vertices(N)],
    )


def cusp_family(q: int) -> Family:
    def certify(D, N):
        cusp = gen_cusp(cusp_family_spec(q, N))
        return gap_certificate(D, cusp.core, cusp.c, cusp.d)

    return Family(
        name="cusp",
        q=q,
        build=lambda N: gen_cusp(cusp_family_spec(q, N)).diagram,
        certify=certify,
    )


FAMILIES = {"ray-blocks": ray_blocks_family, "cusp": cusp_family}
