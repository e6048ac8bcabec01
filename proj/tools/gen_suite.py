#!/usr/bin/env python3
"""Generates the benchmark suite under data/suite.

Writes problem files for five domains, then asks foilex_fixtures for a plan,
a lattice over half of the fluent predicates and a foil pool per problem.
Problems without a plan or without enough foils are regenerated with the next
seed. Output is deterministic for a given --seed.
"""
import argparse
import json
import random
import subprocess
import sys
from pathlib import Path


def pddl_problem(name, domain, objects, init, goal):
    lines = [f"(define (problem {name}) (:domain {domain})", "  (:objects"]
    for typ, names in objects:
        if names:
            lines.append(f"    {' '.join(names)} - {typ}")
    lines.append("  )")
    lines.append("  (:init")
    lines += [f"    ({' '.join(atom)})" for atom in init]
    lines.append("  )")
    lines.append("  (:goal (and")
    lines += [f"    ({' '.join(atom)})" for atom in goal]
    lines.append("  )))")
    return "\n".join(lines) + "\n"


def connected_edges(rng, nodes, extra):
    """Random spanning tree plus `extra` random edges, undirected."""
    order = nodes[:]
    rng.shuffle(order)
    edges = set()
    for i in range(1, len(order)):
        j = rng.randrange(i)
        edges.add(tuple(sorted((order[i], order[j]))))
    pairs = [(a, b) for a in nodes for b in nodes if a < b]
    rng.shuffle(pairs)
    for pair in pairs[:extra]:
        edges.add(pair)
    return sorted(edges)


def rover(rng, index):
    n_wp = rng.randint(4, 6)
    n_rovers = rng.randint(1, 2)
    wps = [f"waypoint{i}" for i in range(n_wp)]
    rovers = [f"rover{i}" for i in range(n_rovers)]
    stores = [f"{r}store" for r in rovers]
    cams = [f"camera{i}" for i in range(n_rovers)]
    objs = [f"objective{i}" for i in range(2)]
    modes = ["colour", "high_res", "low_res"]
    init = []
    vis = connected_edges(rng, wps, n_wp)
    for a, b in vis:
        init += [("visible", a, b), ("visible", b, a)]
    for w in wps:
        if rng.random() < 0.5:
            init.append(("at_soil_sample", w))
        if rng.random() < 0.5:
            init.append(("at_rock_sample", w))
    init += [("at_lander", "general", wps[0]), ("channel_free", "general")]
    for r, s, c in zip(rovers, stores, cams):
        init += [("at", r, rng.choice(wps)), ("available", r), ("store_of", s, r), ("empty", s)]
        init += [("equipped_for_soil_analysis", r), ("equipped_for_rock_analysis", r),
                 ("equipped_for_imaging", r)]
        for a, b in vis:
            init += [("can_traverse", r, a, b), ("can_traverse", r, b, a)]
        init += [("on_board", c, r), ("calibration_target", c, rng.choice(objs)),
                 ("supports", c, "colour"), ("supports", c, rng.choice(["high_res", "low_res"]))]
    for o in objs:
        for w in rng.sample(wps, rng.randint(1, n_wp)):
            init.append(("visible_from", o, w))
    soil = [a[1] for a in init if a[0] == "at_soil_sample"]
    rock = [a[1] for a in init if a[0] == "at_rock_sample"]
    goal = []
    if soil:
        goal += [("communicated_soil_data", w) for w in rng.sample(soil, min(len(soil), 2))]
    if rock:
        goal += [("communicated_rock_data", w) for w in rng.sample(rock, min(len(rock), 2))]
    goal.append(("communicated_image_data", rng.choice(objs), "colour"))
    objects = [("lander", ["general"]), ("mode", modes), ("rover", rovers), ("store", stores),
               ("waypoint", wps), ("camera", cams), ("objective", objs)]
    return pddl_problem(f"rover-{index}", "rover", objects, init, goal)


def satellite(rng, index):
    n_sat = rng.randint(1, 2)
    n_dir = rng.randint(4, 6)
    sats = [f"satellite{i}" for i in range(n_sat)]
    dirs = [f"direction{i}" for i in range(n_dir)]
    modes = ["image1", "infrared0", "spectrograph2"]
    insts = []
    init = []
    for s in sats:
        for k in range(rng.randint(1, 2)):
            inst = f"instrument{len(insts)}"
            insts.append(inst)
            init += [("on_board", inst, s), ("calibration_target", inst, rng.choice(dirs))]
            for m in rng.sample(modes, rng.randint(1, 2)):
                init.append(("supports", inst, m))
        init += [("power_avail", s), ("pointing", s, rng.choice(dirs))]
    supported = sorted({a[2] for a in init if a[0] == "supports"})
    goal = []
    for d in rng.sample(dirs, rng.randint(2, 3)):
        goal.append(("have_image", d, rng.choice(supported)))
    goal.append(("pointing", sats[0], rng.choice(dirs)))
    objects = [("satellite", sats), ("instrument", insts), ("mode", modes), ("direction", dirs)]
    return pddl_problem(f"satellite-{index}", "satellite", objects, init, goal)


def sokoban(rng, index):
    width, height = rng.randint(4, 5), rng.randint(4, 5)
    cells = [(x, y) for x in range(1, width + 1) for y in range(1, height + 1)]
    name = lambda c: f"pos-{c[0]:02d}-{c[1]:02d}"
    interior = [c for c in cells if 1 < c[0] < width and 1 < c[1] < height]
    n_stones = rng.randint(1, 2)
    stones_at = rng.sample(interior, n_stones)
    free = [c for c in cells if c not in stones_at]
    goals = rng.sample([c for c in interior if c not in stones_at], n_stones)
    player = rng.choice([c for c in free])
    init = []
    dirs = {"dir-left": (-1, 0), "dir-right": (1, 0), "dir-up": (0, -1), "dir-down": (0, 1)}
    for c in cells:
        for d, (dx, dy) in dirs.items():
            n = (c[0] + dx, c[1] + dy)
            if n in cells:
                init.append(("move-dir", name(c), name(n), d))
        init.append(("is-goal", name(c)) if c in goals else ("is-nongoal", name(c)))
        if c not in stones_at and c != player:
            init.append(("clear", name(c)))
    init.append(("at", "player-01", name(player)))
    stones = [f"stone-{i + 1:02d}" for i in range(n_stones)]
    for s, c in zip(stones, stones_at):
        init.append(("at", s, name(c)))
        if c in goals:
            init.append(("at-goal", s))
    goal = [("at-goal", s) for s in stones]
    objects = [("direction", list(dirs)), ("player", ["player-01"]), ("location", [name(c) for c in cells]),
               ("stone", stones)]
    return pddl_problem(f"sokoban-{index}", "sokoban-sequential", objects, init, goal)


def barman(rng, index):
    n_ing = 3
    n_cocktails = rng.randint(2, 3)
    n_shots = rng.randint(2, 3)
    ings = [f"ingredient{i + 1}" for i in range(n_ing)]
    cocktails = [f"cocktail{i + 1}" for i in range(n_cocktails)]
    shots = [f"shot{i + 1}" for i in range(n_shots)]
    disps = [f"dispenser{i + 1}" for i in range(n_ing)]
    levels = ["l0", "l1", "l2"]
    init = [("ontable", "shaker1"), ("clean", "shaker1"), ("empty", "shaker1"),
            ("shaker-empty-level", "shaker1", "l0"), ("shaker-level", "shaker1", "l0"),
            ("next", "l0", "l1"), ("next", "l1", "l2"),
            ("handempty", "left"), ("handempty", "right")]
    for s in shots:
        init += [("ontable", s), ("clean", s), ("empty", s)]
    for d, i in zip(disps, ings):
        init.append(("dispenses", d, i))
    for c in cocktails:
        a, b = rng.sample(ings, 2)
        init += [("cocktail-part1", c, a), ("cocktail-part2", c, b)]
    goal = [("contains", rng.choice(shots), rng.choice(cocktails))]
    objects = [("hand", ["left", "right"]), ("level", levels), ("shaker", ["shaker1"]),
               ("shot", shots), ("ingredient", ings), ("cocktail", cocktails), ("dispenser", disps)]
    return pddl_problem(f"barman-{index}", "barman", objects, init, goal)


def woodworking(rng, index):
    colours = ["red", "blue", "green", "black"]
    n_parts = rng.randint(2, 4)
    parts = [f"p{i}" for i in range(n_parts)]
    machines = [("planer", "planer0"), ("grinder", "grinder0"), ("spray-varnisher", "spray-varnisher0"),
                ("immersion-varnisher", "immersion-varnisher0"), ("glazer", "glazer0")]
    init = [("is-smooth", "verysmooth"), ("is-smooth", "smooth"),
            ("grind-treatment-change", "varnished", "colourfragments"),
            ("grind-treatment-change", "glazed", "untreated"),
            ("grind-treatment-change", "untreated", "untreated"),
            ("grind-treatment-change", "colourfragments", "untreated")]
    for _, m in machines:
        init.append(("idle", m))
        if not m.startswith(("planer", "grinder")):
            for c in rng.sample(colours, 2):
                init.append(("has-colour", m, c))
    offered = {a[2] for a in init if a[0] == "has-colour"}
    goal = []
    for p in parts:
        init += [("available", p), ("surface-condition", p, rng.choice(["rough", "smooth"])),
                 ("treatment", p, rng.choice(["untreated", "colourfragments"])), ("colour", p, "natural")]
        kind = rng.choice(["varnished", "glazed", "surface"])
        if kind == "surface":
            goal.append(("surface-condition", p, "verysmooth"))
        else:
            goal += [("treatment", p, kind), ("colour", p, rng.choice(sorted(offered)))]
    objects = [("acolour", colours), ("part", parts)] + [(t, [m]) for t, m in machines]
    return pddl_problem(f"woodworking-{index}", "woodworking-reduced", objects, init, goal)


GENERATORS = {
    "rover": rover,
    "satellite": satellite,
    "sokoban": sokoban,
    "barman": barman,
    "woodworking": woodworking,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixtures", required=True, help="path to the foilex_fixtures binary")
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "suite"))
    ap.add_argument("--problems", type=int, default=6)
    ap.add_argument("--pool", type=int, default=8)
    ap.add_argument("--seed", type=int, default=2019)
    args = ap.parse_args()

    out = Path(args.out)
    manifest = {"problems": []}
    for domain, gen in GENERATORS.items():
        ddir = out / domain
        made = 0
        attempt = 0
        while made < args.problems:
            attempt += 1
            if attempt > args.problems * 20:
                sys.exit(f"{domain}: gave up after {attempt} attempts")
            seed = args.seed * 1000 + attempt
            rng = random.Random(f"{domain}-{seed}")
            stem = f"p{made + 1:02d}"
            problem = ddir / f"{stem}.pddl"
            problem.write_text(gen(rng, made + 1))
            cmd = [args.fixtures, "pool", "--domain", str(ddir / "domain.pddl"), "--problem", str(problem),
                   "--fraction", "0.5", "--seed", str(seed), "--size", str(args.pool),
                   "--out", str(ddir / f"{stem}_foils.json"), "--lattice-out", str(ddir / f"{stem}_lattice.json")]
            result = subprocess.run(cmd, capture_output=True, text=True)
            sys.stderr.write(f"{domain} attempt {attempt}: {result.stderr.strip()}\n")
            if result.returncode != 0:
                continue
            manifest["problems"].append({
                "domain": domain,
                "domain_file": f"{domain}/domain.pddl",
                "problem_file": f"{domain}/{stem}.pddl",
                "foils": f"{domain}/{stem}_foils.json",
                "lattice": f"{domain}/{stem}_lattice.json",
            })
            made += 1
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")


if __name__ == "__main__":
    main()
