"""Command-line workflow: census, embed, cluster, validate, explain, idr,
generate, and the end-to-end pipeline. Every command writes its outputs
plus one manifest into --out; a failing pipeline stage leaves a FAILED
marker naming the stage and keeps partial outputs."""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .clustering import (
    assignment_seed,
    kmeans,
    roles_from_csv,
    roles_to_csv,
    sweep,
)
from .config import config_from_dict, load_config
from .diversity import (
    binned_idr_report,
    build_diversity_report,
    discipline_distance,
)
from .embeddings import (
    embedding_to_csv,
    graphwave_embed,
    import_embedding,
    rolx_embed,
)
from .graph import load_edge_list, load_node_table, write_edge_list, write_node_table
from .manifest import RunManifest, load_manifest
from .orbits import count_orbits, log_transform, orbits_from_csv, orbits_to_csv
from .planted import (
    BUILTIN_TEMPLATES,
    barbell_template,
    chain_template,
    clique_template,
    generate_planted_graph,
    star_template,
)
from .seeds import derive_seed, resolve_threads
from .surrogate import (
    effect_curve,
    orbit3_threshold,
    permutation_importance,
    refit_on_subpopulation,
    train_surrogate,
    write_effect_curves,
)
from .graph import NodeTable


class StageError(RuntimeError):
    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _zero_column(matrix, col):
    values = matrix.values.copy()
    values[:, col] = 0.0
    matrix.values = values
    return matrix


def _load_inputs(graph_path, labels_path):
    table0 = load_node_table(labels_path) if labels_path else None
    graph, table = load_edge_list(graph_path, "create", table=table0)
    return graph, table


def _compute_embeddings(graph, table, cfg):
    embeddings = []
    for method in cfg.embed.methods:
        if method == "graphwave":
            embeddings.append(
                graphwave_embed(
                    graph,
                    scales=cfg.embed.graphwave_scales,
                    sample_points=cfg.embed.sample_points,
                    t_max=cfg.embed.t_max,
                    kernel=cfg.embed.kernel,
                    chebyshev_order=cfg.embed.chebyshev_order,
                )
            )
        elif method == "rolx":
            embeddings.append(
                rolx_embed(
                    graph,
                    rank=cfg.embed.rolx_rank,
                    refex_depth=cfg.embed.refex_depth,
                    seed=derive_seed(cfg.seed, "rolx"),
                )
            )
        else:
            raise ValueError(
                f"unknown native method {method!r}; external methods enter "
                "via [embed] import_paths"
            )
    for path in cfg.embed.import_paths:
        embeddings.append(import_embedding(path, table))
    return embeddings


def run_pipeline(graph_path, labels_path, cfg, out_dir) -> RunManifest:
    out = _out_dir(out_dir)
    inputs = {"graph": graph_path}
    if labels_path:
        inputs["labels"] = labels_path
    stage = "load"
    try:
        manifest = RunManifest.start(
            command="pipeline",
            parameters={
                "graph_path": str(graph_path),
                "labels_path": str(labels_path) if labels_path else None,
                "config": cfg.to_dict(),
            },
            seed=cfg.seed,
            inputs=inputs,
        )
        graph, table = _load_inputs(graph_path, labels_path)

        stage = "census"
        orbits = count_orbits(graph, memory_budget_mb=cfg.memory_budget_mb)
        orbits_to_csv(orbits, table, out / "orbits.csv")
        manifest.add_output(out / "orbits.csv")
        features = log_transform(orbits)
        if cfg.drop_orbit0:
            features = _zero_column(features, 0)
            manifest.note("orbit 0 neutralized in the feature space")

        stage = "embed"
        embeddings = _compute_embeddings(graph, table, cfg)
        for emb in embeddings:
            path = out / f"embedding_{emb.method_tag}.csv"
            embedding_to_csv(emb, table, path)
            manifest.add_output(path)

        stage = "validate"
        ks = range(cfg.cluster.k_min, cfg.cluster.k_max + 1)
        table_sweep = sweep(
            embeddings,
            ks,
            features,
            seed=cfg.seed,
            sample_cap=cfg.cluster.sample_cap,
            threads=resolve_threads(cfg.threads),
        )
        table_sweep.to_csv(out / "sweep.csv")
        manifest.add_output(out / "sweep.csv")
        manifest.parameters["validation_feature_space"] = (
            "log1p-orbit" + ("-no-degree" if cfg.drop_orbit0 else "")
        )

        stage = "cluster"
        assignments = {}
        for emb in embeddings:
            assignment = kmeans(
                emb,
                cfg.cluster.chosen_k,
                seed=assignment_seed(cfg.seed, emb.method_tag, cfg.cluster.chosen_k),
            )
            assignments[emb.method_tag] = assignment
            path = out / f"roles_{emb.method_tag}.csv"
            roles_to_csv(assignment, table, path)
            manifest.add_output(path)

        stage = "explain"
        method = cfg.explain.method
        if method not in assignments:
            raise ValueError(f"explain.method {method!r} not among embeddings")
        roles = assignments[method]
        model = train_surrogate(
            features,
            roles,
            trees=cfg.explain.trees,
            seed=derive_seed(cfg.seed, "surrogate", method),
        )
        report = permutation_importance(
            model,
            features,
            roles,
            repeats=cfg.explain.importance_repeats,
            seed=derive_seed(cfg.seed, "importance", method),
        )
        report.to_csv(out / "importance.csv")
        manifest.add_output(out / "importance.csv")
        threshold = orbit3_threshold(orbits)
        curves = []
        for orbit in cfg.explain.effect_orbits:
            col = features.values[:, orbit]
            if col.min() == col.max():
                manifest.note(f"orbit {orbit} constant; effect curve skipped")
                continue
            for cls in model.class_labels:
                curves.append(
                    effect_curve(
                        model,
                        features,
                        orbit=orbit,
                        class_id=int(cls),
                        bins=cfg.explain.ale_bins,
                        kind=cfg.explain.effect_kind,
                    )
                )
        write_effect_curves(curves, threshold, out / "effects.csv")
        manifest.add_output(out / "effects.csv")
        manifest.parameters["surrogate_holdout_accuracy"] = model.holdout_accuracy

        if cfg.explain.keep_roles:
            sub = refit_on_subpopulation(
                features,
                roles,
                keep_roles=cfg.explain.keep_roles,
                trees=cfg.explain.trees,
                seed=derive_seed(cfg.seed, "surrogate-sub", method),
            )
            mask = np.isin(roles.labels, list(cfg.explain.keep_roles))
            sub_features = type(features)(values=features.values[mask])
            sub_labels = roles.labels[mask]
            sub_report = permutation_importance(
                sub,
                sub_features,
                sub_labels,
                repeats=cfg.explain.importance_repeats,
                seed=derive_seed(cfg.seed, "importance-sub", method),
            )
            sub_report.to_csv(out / "importance_subpop.csv")
            manifest.add_output(out / "importance_subpop.csv")
            sub_curves = []
            for orbit in cfg.explain.effect_orbits:
                col = sub_features.values[:, orbit]
                if col.min() == col.max():
                    continue
                for cls in sub.class_labels:
                    sub_curves.append(
                        effect_curve(
                            sub,
                            sub_features,
                            orbit=orbit,
                            class_id=int(cls),
                            bins=cfg.explain.ale_bins,
                            kind=cfg.explain.effect_kind,
                        )
                    )
            write_effect_curves(sub_curves, threshold, out / "effects_subpop.csv")
            manifest.add_output(out / "effects_subpop.csv")

        stage = "idr"
        disciplines = {c for c in table.categories if c is not None}
        if len(disciplines) >= 2:
            dmat = discipline_distance(table, graph, mode=cfg.idr.distance)
            diversity = build_diversity_report(
                graph,
                table,
                dmat,
                assignments[method],
                direction=cfg.idr.direction,
                pair_counting=cfg.idr.pair_counting,
            )
            diversity.to_csv(out / "diversity.csv", table)
            manifest.add_output(out / "diversity.csv")
            binned = binned_idr_report(
                diversity,
                assignments[method],
                bins=cfg.idr.bins,
                min_per_role=cfg.idr.min_per_role,
            )
            binned.to_csv(out / "idr_bins.csv")
            binned.values_to_csv(out / "idr_values.csv")
            manifest.add_output(out / "idr_bins.csv")
            manifest.add_output(out / "idr_values.csv")
        else:
            manifest.note("idr stage skipped: fewer than 2 disciplines")

        manifest.parameters["component_count"] = len(graph.components())
        manifest.write(out)
        return manifest
    except Exception as exc:
        marker = out / "FAILED"
        with open(marker, "w", encoding="utf-8") as fh:
            fh.write(f"stage={stage}\nerror={exc}\n")
        raise StageError(stage, exc) from exc


def _pick(flag_value, config_value):
    """Command-line flag wins; otherwise the config file's value."""
    return config_value if flag_value is None else flag_value


def _cmd_census(args) -> int:
    out = _out_dir(args.out)
    cfg = load_config(args.config)
    budget = _pick(args.memory_budget_mb, cfg.memory_budget_mb)
    graph, table = _load_inputs(args.graph, args.labels)
    manifest = RunManifest.start(
        "census",
        {"graph_path": str(args.graph), "memory_budget_mb": budget},
        seed=0,
        inputs={"graph": args.graph},
    )
    orbits = count_orbits(graph, memory_budget_mb=budget)
    orbits_to_csv(orbits, table, out / "orbits.csv")
    manifest.add_output(out / "orbits.csv")
    manifest.parameters["component_count"] = len(graph.components())
    manifest.write(out)
    print(f"census: {graph.node_count} nodes -> {out / 'orbits.csv'}")
    return 0


def _cmd_generate(args) -> int:
    out = _out_dir(args.out)
    maker = BUILTIN_TEMPLATES.get(args.template)
    if maker is None:
        raise ValueError(
            f"unknown template {args.template!r}; choose from {sorted(BUILTIN_TEMPLATES)}"
        )
    if args.template == "barbell":
        tpl = barbell_template(args.clique_size, args.chain_len)
    elif args.template == "chain":
        tpl = chain_template(args.length)
    elif args.template == "star":
        tpl = star_template(args.length)
    else:
        tpl = clique_template(args.clique_size)

    planted = generate_planted_graph(
        [tpl], copies=args.copies, noise_edges=args.noise_edges, seed=args.seed
    )
    ids = [f"n{i}" for i in range(planted.graph.node_count)]

    categories = [None] * planted.graph.node_count
    if args.label_mode == "clique-side":
        pool = [f"disc{i:02d}" for i in range(args.disciplines)]
        size = tpl.size
        for copy in range(args.copies):
            base = copy * size
            if args.template == "barbell":
                left = pool[(2 * copy) % len(pool)]
                right = pool[(2 * copy + 1) % len(pool)]
                half = args.clique_size
                for pos in range(size):
                    # clique A and the chain carry the left label, clique B the right
                    in_b = half <= pos < 2 * half
                    categories[base + pos] = right if in_b else left
            else:
                side = pool[copy % len(pool)]
                for pos in range(size):
                    categories[base + pos] = side

    table = NodeTable(external_ids=ids, categories=categories)
    write_edge_list(planted.graph, table, out / "edges.txt")
    write_node_table(table, out / "nodes.csv")
    with open(out / "roles.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id,true_role,role_name\n")
        for i, ext in enumerate(ids):
            code = int(planted.true_role[i])
            fh.write(f"{ext},{code},{planted.role_names[code]}\n")

    manifest = RunManifest.start(
        "generate",
        {
            "template": tpl.name,
            "copies": args.copies,
            "noise_edges": args.noise_edges,
            "label_mode": args.label_mode,
        },
        seed=args.seed,
        inputs={},
    )
    for name in ("edges.txt", "nodes.csv", "roles.csv"):
        manifest.add_output(out / name)
    manifest.write(out)
    print(
        f"generated {planted.graph.node_count} nodes / "
        f"{planted.graph.edge_count} edges ({tpl.name} x {args.copies}) -> {out}"
    )
    return 0


def _cmd_embed(args) -> int:
    out = _out_dir(args.out)
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.method:
        cfg.embed.methods = tuple(args.method)
    graph, table = _load_inputs(args.graph, args.labels)
    manifest = RunManifest.start(
        "embed",
        {"graph_path": str(args.graph), "methods": list(cfg.embed.methods), "config": cfg.to_dict()},
        seed=cfg.seed,
        inputs={"graph": args.graph},
    )
    for emb in _compute_embeddings(graph, table, cfg):
        path = out / f"embedding_{emb.method_tag}.csv"
        embedding_to_csv(emb, table, path)
        manifest.add_output(path)
        print(f"embed: {emb.method_tag} d={emb.d} -> {path}")
    manifest.write(out)
    return 0


def _cmd_cluster(args) -> int:
    out = _out_dir(args.out)
    cfg = load_config(args.config)
    graph, table = _load_inputs(args.graph, args.labels)
    emb = import_embedding(args.embedding, table)
    assignment = kmeans(emb, args.k, seed=args.seed if args.seed is not None else cfg.seed)
    path = out / f"roles_{emb.method_tag}.csv"
    roles_to_csv(assignment, table, path)
    manifest = RunManifest.start(
        "cluster",
        {"embedding": str(args.embedding), "k": args.k},
        seed=assignment.seed,
        inputs={"graph": args.graph, "embedding": args.embedding},
    )
    manifest.add_output(path)
    manifest.write(out)
    print(f"cluster: k={args.k} k_effective={assignment.k_effective} -> {path}")
    return 0


def _cmd_validate(args) -> int:
    out = _out_dir(args.out)
    cfg = load_config(args.config)
    k_min = _pick(args.k_min, cfg.cluster.k_min)
    k_max = _pick(args.k_max, cfg.cluster.k_max)
    graph, table = _load_inputs(args.graph, args.labels)
    orbits, _ = orbits_from_csv(args.orbits, table)
    features = log_transform(orbits)
    embeddings = [import_embedding(p, table) for p in args.embedding]
    seed = args.seed if args.seed is not None else cfg.seed
    result = sweep(
        embeddings,
        range(k_min, k_max + 1),
        features,
        seed=seed,
        sample_cap=cfg.cluster.sample_cap,
    )
    result.to_csv(out / "sweep.csv")
    manifest = RunManifest.start(
        "validate",
        {"k_min": k_min, "k_max": k_max, "orbits": str(args.orbits)},
        seed=seed,
        inputs={"orbits": args.orbits, **{f"embedding{i}": p for i, p in enumerate(args.embedding)}},
    )
    manifest.add_output(out / "sweep.csv")
    manifest.write(out)
    print(f"validate: {len(result.rows)} rows -> {out / 'sweep.csv'}")
    return 0


def _cmd_explain(args) -> int:
    out = _out_dir(args.out)
    cfg = load_config(args.config)
    args.trees = _pick(args.trees, cfg.explain.trees)
    args.repeats = _pick(args.repeats, cfg.explain.importance_repeats)
    args.bins = _pick(args.bins, cfg.explain.ale_bins)
    args.kind = _pick(args.kind, cfg.explain.effect_kind)
    args.orbit = _pick(args.orbit, list(cfg.explain.effect_orbits))
    args.keep_roles = _pick(args.keep_roles, list(cfg.explain.keep_roles))
    orbits, orbit_ids = orbits_from_csv(args.orbits)
    roles, role_ids = roles_from_csv(args.roles)
    if orbit_ids != role_ids:
        mismatched = [
            (a, b) for a, b in zip(orbit_ids, role_ids) if a != b
        ] + [(a, "<missing>") for a in orbit_ids[len(role_ids):]] + [
            ("<missing>", b) for b in role_ids[len(orbit_ids):]
        ]
        raise ValueError(
            f"orbit/role id mismatch; first differences: {mismatched[:10]}"
        )
    features = log_transform(orbits)
    seed = args.seed if args.seed is not None else cfg.seed
    model = train_surrogate(features, roles, trees=args.trees, seed=seed)
    report = permutation_importance(
        model, features, roles, repeats=args.repeats, seed=derive_seed(seed, "importance")
    )
    report.to_csv(out / "importance.csv")
    threshold = orbit3_threshold(orbits)
    curves = []
    for orbit in args.orbit:
        col = features.values[:, orbit]
        if col.min() == col.max():
            print(f"explain: orbit {orbit} constant, curve skipped", file=sys.stderr)
            continue
        for cls in model.class_labels:
            curves.append(
                effect_curve(model, features, orbit, int(cls), bins=args.bins, kind=args.kind)
            )
    write_effect_curves(curves, threshold, out / "effects.csv")
    manifest = RunManifest.start(
        "explain",
        {
            "orbits": str(args.orbits),
            "roles": str(args.roles),
            "trees": args.trees,
            "repeats": args.repeats,
            "bins": args.bins,
            "kind": args.kind,
            "effect_orbits": list(args.orbit),
            "keep_roles": list(args.keep_roles) if args.keep_roles else [],
            "holdout_accuracy": model.holdout_accuracy,
        },
        seed=seed,
        inputs={"orbits": args.orbits, "roles": args.roles},
    )
    manifest.add_output(out / "importance.csv")
    manifest.add_output(out / "effects.csv")

    if args.keep_roles:
        sub = refit_on_subpopulation(
            features, roles, keep_roles=args.keep_roles, trees=args.trees,
            seed=derive_seed(seed, "subpop"),
        )
        mask = np.isin(roles.labels, list(args.keep_roles))
        sub_features = type(features)(values=features.values[mask])
        sub_report = permutation_importance(
            sub, sub_features, roles.labels[mask], repeats=args.repeats,
            seed=derive_seed(seed, "importance-sub"),
        )
        sub_report.to_csv(out / "importance_subpop.csv")
        sub_curves = []
        for orbit in args.orbit:
            col = sub_features.values[:, orbit]
            if col.min() == col.max():
                continue
            for cls in sub.class_labels:
                sub_curves.append(
                    effect_curve(sub, sub_features, orbit, int(cls), bins=args.bins, kind=args.kind)
                )
        write_effect_curves(sub_curves, threshold, out / "effects_subpop.csv")
        manifest.add_output(out / "importance_subpop.csv")
        manifest.add_output(out / "effects_subpop.csv")

    manifest.write(out)
    print(
        f"explain: accuracy={model.holdout_accuracy:.3f} top={report.formatted(3)} -> {out}"
    )
    return 0


def _cmd_idr(args) -> int:
    out = _out_dir(args.out)
    cfg = load_config(args.config)
    args.direction = _pick(args.direction, cfg.idr.direction)
    args.distance = _pick(args.distance, cfg.idr.distance)
    args.bins = _pick(args.bins, cfg.idr.bins)
    args.min_per_role = _pick(args.min_per_role, cfg.idr.min_per_role)
    args.pair_counting = _pick(args.pair_counting, cfg.idr.pair_counting)
    graph, table = _load_inputs(args.graph, args.labels)
    roles, _ = roles_from_csv(args.roles, table)
    dmat = discipline_distance(table, graph, mode=args.distance)
    report = build_diversity_report(
        graph, table, dmat, roles, direction=args.direction,
        pair_counting=args.pair_counting,
    )
    report.to_csv(out / "diversity.csv", table)
    binned = binned_idr_report(
        report, roles, bins=args.bins, min_per_role=args.min_per_role
    )
    binned.to_csv(out / "idr_bins.csv")
    binned.values_to_csv(out / "idr_values.csv")
    manifest = RunManifest.start(
        "idr",
        {
            "direction": args.direction,
            "distance": args.distance,
            "bins": args.bins,
            "min_per_role": args.min_per_role,
            "included_bins": binned.included_bins,
        },
        seed=0,
        inputs={"graph": args.graph, "labels": args.labels, "roles": args.roles},
    )
    for name in ("diversity.csv", "idr_bins.csv", "idr_values.csv"):
        manifest.add_output(out / name)
    manifest.write(out)
    print(f"idr: {len(binned.included_bins)} included bin(s) -> {out}")
    return 0


def _cmd_pipeline(args) -> int:
    if args.from_manifest:
        stored = load_manifest(args.from_manifest)
        params = stored["parameters"]
        cfg = config_from_dict(params["config"])
        graph_path = params["graph_path"]
        labels_path = params["labels_path"]
    else:
        cfg = load_config(args.config)
        graph_path = args.graph
        labels_path = args.labels
    if graph_path is None:
        raise ValueError("pipeline requires a graph (positional or --from-manifest)")
    if args.seed is not None:
        cfg.seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    cfg.threads = resolve_threads(cfg.threads)
    manifest = run_pipeline(graph_path, labels_path, cfg, args.out)
    print(f"pipeline: ok ({len(manifest.outputs)} outputs) -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitroles",
        description="Structural role discovery with graphlet-orbit explanations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, labels=True, config=True):
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None)
        if config:
            p.add_argument("--config", default=None, help="INI config file")
        if labels:
            p.add_argument("--labels", default=None, help="node table CSV")

    p = sub.add_parser("census", help="orbit census of an edge list")
    p.add_argument("graph")
    p.add_argument("--memory-budget-mb", type=float, default=None)
    common(p)

    p = sub.add_parser("generate", help="planted-role synthetic corpus")
    p.add_argument("--template", default="barbell", choices=sorted(BUILTIN_TEMPLATES))
    p.add_argument("--clique-size", type=int, default=5)
    p.add_argument("--chain-len", type=int, default=3)
    p.add_argument("--length", type=int, default=4, help="chain/star size")
    p.add_argument("--copies", type=int, default=20)
    p.add_argument("--noise-edges", type=int, default=0)
    p.add_argument("--label-mode", default="none", choices=["none", "clique-side"])
    p.add_argument("--disciplines", type=int, default=4)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("embed", help="native embeddings of a graph")
    p.add_argument("graph")
    p.add_argument("--method", action="append", default=None, required=False)
    common(p)

    p = sub.add_parser("cluster", help="k-means roles from an embedding CSV")
    p.add_argument("graph")
    p.add_argument("--embedding", required=True)
    p.add_argument("--k", type=int, required=True)
    common(p)

    p = sub.add_parser("validate", help="silhouette sweep in orbit space")
    p.add_argument("graph")
    p.add_argument("--orbits", required=True)
    p.add_argument("--embedding", action="append", required=True)
    p.add_argument("--k-min", type=int, default=None)
    p.add_argument("--k-max", type=int, default=None)
    common(p)

    p = sub.add_parser("explain", help="surrogate importance and effect curves")
    p.add_argument("--orbits", required=True)
    p.add_argument("--roles", required=True)
    p.add_argument("--trees", type=int, default=None)
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--kind", default=None, choices=["ALE", "PDP"])
    p.add_argument("--orbit", action="append", type=int, default=None)
    p.add_argument("--keep-roles", type=int, nargs="*", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", default=None, help="INI config file")

    p = sub.add_parser("idr", help="Rao-Stirling interdisciplinarity report")
    p.add_argument("graph")
    p.add_argument("--roles", required=True)
    p.add_argument("--direction", default=None, choices=["citing", "cited", "all"])
    p.add_argument("--distance", default=None, choices=["uniform", "cocitation_cosine"])
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--min-per-role", type=int, default=None)
    p.add_argument("--pair-counting", default=None, choices=["ordered", "unordered"])
    common(p)

    p = sub.add_parser("pipeline", help="end-to-end workflow")
    p.add_argument("graph", nargs="?", default=None)
    p.add_argument("--from-manifest", default=None)
    p.add_argument("--threads", type=int, default=None)
    common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "census": _cmd_census,
        "generate": _cmd_generate,
        "embed": _cmd_embed,
        "cluster": _cmd_cluster,
        "validate": _cmd_validate,
        "explain": _cmd_explain,
        "idr": _cmd_idr,
        "pipeline": _cmd_pipeline,
    }
    try:
        return handlers[args.command](args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
