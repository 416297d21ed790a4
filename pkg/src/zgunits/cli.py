"""Command line front end.

Commands: units, hind, decompose, cycunits, relations.
Exit codes: 0 success, 2 unsupported input, 3 resource/precision bound
hit, 1 internal error.
"""

from __future__ import annotations

import json
import sys
import time

import click

from .abgroup import ayoub_rank, parse_group_spec
from .config import Config
from .cyclotomic import format_cyc, parse_cyc
from .errors import (
    EnumerationBoundExceeded,
    ParseError,
    PrecisionExhausted,
    UnsupportedConductor,
    ZGUnitsError,
)

EXIT_UNSUPPORTED = 2
EXIT_RESOURCE = 3


def _config(precision, max_enum, seed, no_saturation):
    return Config(
        precision=precision,
        enum_bound=max_enum,
        seed=seed,
        no_saturation=no_saturation,
    )


def _emit(payload, fmt):
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2, default=str))
    else:
        _emit_text(payload)


def _emit_text(payload, indent=0):
    pad = "  " * indent
    if isinstance(payload, dict):
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v and not _short(v):
                click.echo(f"{pad}{k}:")
                _emit_text(v, indent + 1)
            else:
                click.echo(f"{pad}{k}: {v}")
    elif isinstance(payload, list):
        for v in payload:
            click.echo(f"{pad}- {v}")
    else:
        click.echo(f"{pad}{payload}")


def _short(v):
    return isinstance(v, list) and all(isinstance(x, (int, str, float)) for x in v) and len(v) <= 8


def _fail(err, code):
    click.echo(json.dumps({"error": {"type": type(err).__name__, "message": str(err)}}))
    sys.exit(code)


def _run(fn):
    try:
        fn()
    except (ParseError, UnsupportedConductor) as e:
        _fail(e, EXIT_UNSUPPORTED)
    except (PrecisionExhausted, EnumerationBoundExceeded) as e:
        _fail(e, EXIT_RESOURCE)
    except ZGUnitsError as e:
        _fail(e, 1)


_common = [
    click.option("--precision", default=128, show_default=True,
                 help="initial working precision in decimal digits"),
    click.option("--max-enum", default=10**6, show_default=True,
                 help="enumeration bound for finite rings and candidates"),
    click.option("--format", "fmt", default="json", show_default=True,
                 type=click.Choice(["json", "text"])),
    click.option("--seed", default=0, show_default=True,
                 help="seed for the auxiliary prime order in saturation"),
    click.option("--no-saturation", is_flag=True, default=False,
                 help="diagnostic: skip saturation of cyclotomic unit groups"),
]


def _with_common(f):
    for opt in reversed(_common):
        f = opt(f)
    return f


@click.group()
def main():
    """Exact unit groups of integral group rings of finite abelian groups."""


@main.command()
@click.argument("group_spec")
@_with_common
def units(group_spec, precision, max_enum, fmt, seed, no_saturation):
    """Generators of the unit group of ZG for the given abelian group."""

    def run():
        from .merge import merged_group_ring_generators, unit_group_zg

        G = parse_group_spec(group_spec)
        cfg = _config(precision, max_enum, seed, no_saturation)
        t0 = time.perf_counter()
        U, report = unit_group_zg(G, cfg)
        elements = merged_group_ring_generators(G, U)
        torsion = [e for e, d in zip(elements, U.pres.orders) if d]
        torsion_orders = [d for d in U.pres.orders if d]
        free = [e for e, d in zip(elements, U.pres.orders) if d == 0]
        payload = {
            "group": G.label(),
            "rank": U.rank,
            "ayoub_rank": ayoub_rank(G),
            "torsion": {
                "order": U.torsion_order,
                "generators": [list(t.num) for t in torsion],
                "generator_orders": torsion_orders,
            },
            "generators": [list(u.num) for u in free],
            "element_order": [list(g) for g in G.elements()],
            "timings": {
                "relations_s": round(report["relations_s"], 3),
                "total_s": round(time.perf_counter() - t0, 3),
            },
        }
        _emit(payload, fmt)

    _run(run)


@main.command()
@click.argument("group_spec")
@_with_common
def hind(group_spec, precision, max_enum, fmt, seed, no_saturation):
    """Index of the constructable (Hoechsmann) units in the full unit group."""

    def run():
        from .hoechsmann import hoechsmann_index

        G = parse_group_spec(group_spec)
        cfg = _config(precision, max_enum, seed, no_saturation)
        idx = hoechsmann_index(G, cfg)
        _emit({"group": G.label(), "hoechsmann_index": int(idx)}, fmt)

    _run(run)


@main.command()
@click.argument("group_spec")
@_with_common
def decompose(group_spec, precision, max_enum, fmt, seed, no_saturation):
    """Decomposition of QG into cyclotomic fields: conductors and counts."""

    def run():
        from .groupring import decomposition

        G = parse_group_spec(group_spec)
        _emit(
            {
                "group": G.label(),
                "components": [{"conductor": d, "count": t}
                               for d, t in decomposition(G)],
            },
            fmt,
        )

    _run(run)


@main.command()
@click.argument("conductor", type=int)
@_with_common
def cycunits(conductor, precision, max_enum, fmt, seed, no_saturation):
    """Generators of the unit group of the ring of integers of Q(ζ_n)."""

    def run():
        from .cycunits import full_unit_group

        cfg = _config(precision, max_enum, seed, no_saturation)
        desc = full_unit_group(conductor, cfg)
        _emit(
            {
                "conductor": desc.conductor,
                "rank": desc.rank,
                "torsion": {
                    "order": desc.torsion_order,
                    "generator": format_cyc(desc.torsion_gen),
                },
                "generators": [format_cyc(u) for u in desc.free_gens],
            },
            fmt,
        )

    _run(run)


@main.command()
@click.argument("conductor", type=int)
@click.argument("units_file", type=click.Path(exists=True, dir_okay=False))
@_with_common
def relations(conductor, units_file, precision, max_enum, fmt, seed, no_saturation):
    """Basis of the multiplicative relation lattice of units from a file
    (one element per line, text form [c0,c1,...]@n)."""

    def run():
        from .cyclotomic import canonical_conductor
        from .relations import relation_lattice_cyc

        cfg = _config(precision, max_enum, seed, no_saturation)
        elems = []
        with open(units_file) as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    elems.append(parse_cyc(line))
        n = canonical_conductor(conductor)
        for e in elems:
            if e.n != n:
                raise ParseError(
                    f"element {format_cyc(e)} does not live in conductor {conductor}"
                )
        lat = relation_lattice_cyc(elems, n, cfg)
        _emit(
            {
                "conductor": n,
                "count": len(elems),
                "basis": [list(r) for r in lat.rows],
            },
            fmt,
        )

    _run(run)


if __name__ == "__main__":
    main()
