import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitroles.graph import (
    Graph,
    GraphFormatError,
    NodeTable,
    load_edge_list,
    load_node_table,
    write_edge_list,
    write_node_table,
)
from orbitroles.planted import (
    barbell_template,
    chain_template,
    clique_template,
    generate_planted_graph,
    star_template,
)

from util import er_graph


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadEdgeList:
    def test_duplicate_edges_collapse(self, tmp_path):
        path = write(tmp_path, "g.txt", "a b\nb c\na b\n")
        graph, table = load_edge_list(path)
        assert graph.node_count == 3
        assert graph.edge_count == 2

    def test_self_loop_dropped_with_warning(self, tmp_path, caplog):
        path = write(tmp_path, "g.txt", "a a\na b\n")
        with caplog.at_level(logging.WARNING):
            graph, _ = load_edge_list(path)
        assert graph.node_count == 2
        assert graph.edge_count == 1
        assert any("1 self-loop" in rec.getMessage() for rec in caplog.records)

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        path = write(tmp_path, "g.txt", "# header\n\na b\n# more\nb c\n")
        graph, _ = load_edge_list(path)
        assert graph.edge_count == 2

    def test_malformed_line_reports_number(self, tmp_path):
        path = write(tmp_path, "g.txt", "a b\na b c\n")
        with pytest.raises(GraphFormatError, match=":2"):
            load_edge_list(path)

    def test_empty_file_rejected(self, tmp_path):
        path = write(tmp_path, "g.txt", "# nothing\n")
        with pytest.raises(GraphFormatError, match="empty"):
            load_edge_list(path)

    def test_strict_requires_known_ids(self, tmp_path):
        table = NodeTable(external_ids=["a", "b"])
        path = write(tmp_path, "g.txt", "a b\nb c\n")
        with pytest.raises(GraphFormatError, match="'c'"):
            load_edge_list(path, id_policy="strict", table=table)

    def test_strict_without_table_rejected(self, tmp_path):
        path = write(tmp_path, "g.txt", "a b\n")
        with pytest.raises(ValueError, match="strict"):
            load_edge_list(path, id_policy="strict")

    def test_isolated_table_nodes_kept_with_degree_zero(self, tmp_path):
        table = NodeTable(external_ids=["a", "b", "ghost"])
        path = write(tmp_path, "g.txt", "a b\n")
        graph, out = load_edge_list(path, id_policy="create", table=table)
        assert graph.node_count == 3
        assert graph.degree(out.index_of("ghost")) == 0

    def test_direction_pairs_follow_line_order(self, tmp_path):
        path = write(tmp_path, "g.txt", "a b\nc a\n")
        graph, table = load_edge_list(path)
        a, b, c = (table.index_of(x) for x in "abc")
        assert graph.directed_pairs == ((a, b), (c, a))


class TestNodeTable:
    def test_two_rows_two_categories(self, tmp_path):
        path = write(tmp_path, "n.csv", "id,category\na,Medicine\nb,Chemistry\n")
        table = load_node_table(path)
        assert len(table) == 2
        assert len(set(table.categories)) == 2

    def test_empty_category_is_absent(self, tmp_path):
        path = write(tmp_path, "n.csv", "id,category\na,\nb,Chemistry\n")
        table = load_node_table(path)
        assert table.categories[0] is None

    def test_eight_category_table(self, tmp_path):
        cats = [
            "Computer Science",
            "Mathematics",
            "Medicine",
            "Chemistry",
            "Social Sciences",
            "Neuroscience",
            "Engineering",
            "Biochemistry Genetics and Molecular Biology",
        ]
        rows = "".join(f"p{i},{c}\n" for i, c in enumerate(cats))
        path = write(tmp_path, "n.csv", "id,category\n" + rows)
        table = load_node_table(path)
        assert len({c for c in table.categories if c is not None}) == 8

    def test_duplicate_id_rejected(self, tmp_path):
        path = write(tmp_path, "n.csv", "id,category\na,X\na,Y\n")
        with pytest.raises(GraphFormatError, match="duplicate"):
            load_node_table(path)

    def test_extra_columns_preserved(self, tmp_path):
        path = write(tmp_path, "n.csv", "id,category,year\na,X,2017\nb,,2018\n")
        table = load_node_table(path)
        assert table.extra["year"] == ["2017", "2018"]

    def test_node_table_round_trip(self, tmp_path):
        table = NodeTable(external_ids=["a", "b"], categories=["X", None])
        path = tmp_path / "n.csv"
        write_node_table(table, path)
        back = load_node_table(path)
        assert back.external_ids == table.external_ids
        assert back.categories == table.categories


class TestGraphInvariants:
    def test_degree_sum_is_twice_edges(self):
        g = er_graph(60, 0.1, 3)
        assert int(g.degrees().sum()) == 2 * g.edge_count

    def test_adjacency_sorted_and_symmetric(self):
        g = er_graph(40, 0.15, 4)
        for v, row in enumerate(g.adjacency):
            assert list(row) == sorted(row)
            assert v not in row
            for w in row:
                assert g.has_edge(w, v)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 25), st.integers(0, 10_000))
    def test_round_trip_preserves_adjacency(self, n, seed):
        import tempfile
        from pathlib import Path

        g = er_graph(n, 0.3, seed)
        if g.edge_count == 0:
            return  # loader rejects empty files by contract
        table = NodeTable(external_ids=[f"v{i}" for i in range(n)])
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "g.txt"
            write_edge_list(g, table, path)
            back, back_table = load_edge_list(path, id_policy="create", table=table)
        assert back.adjacency == g.adjacency
        assert back_table.external_ids == table.external_ids

    def test_components(self):
        g = Graph.from_edges(5, [(0, 1), (2, 3)])
        comps = g.components()
        assert comps == [[0, 1], [2, 3], [4]]


class TestPlantedGraphs:
    def test_clique_copies_single_role(self):
        planted = generate_planted_graph([clique_template(5)], copies=10, seed=0)
        assert planted.graph.node_count == 50
        assert len(planted.role_names) == 1

    def test_chain_roles(self):
        planted = generate_planted_graph([chain_template(4)], copies=10, seed=0)
        assert sorted(planted.role_names) == ["chain-end", "chain-interior"]
        counts = np.bincount(planted.true_role)
        assert sorted(counts.tolist()) == [20, 20]

    def test_star_roles(self):
        planted = generate_planted_graph([star_template(3)], copies=2, seed=0)
        assert sorted(planted.role_names) == ["star-center", "star-leaf"]

    def test_barbell_role_counts(self):
        # two 5-cliques joined by a 3-node chain: per copy 8 members,
        # 2 attachments, 1 bridge-center
        planted = generate_planted_graph([barbell_template(5, 3)], copies=20, seed=0)
        counts = {
            name: int((planted.true_role == i).sum())
            for i, name in enumerate(planted.role_names)
        }
        assert counts == {
            "clique-member": 160,
            "clique-attachment": 40,
            "bridge-center": 20,
        }

    def test_seed_determinism_bit_identical(self):
        a = generate_planted_graph([barbell_template(5, 3)], 5, noise_edges=30, seed=9)
        b = generate_planted_graph([barbell_template(5, 3)], 5, noise_edges=30, seed=9)
        assert a.graph.adjacency == b.graph.adjacency
        assert np.array_equal(a.true_role, b.true_role)

    def test_noise_edges_added_exactly(self):
        base = generate_planted_graph([clique_template(4)], 5, noise_edges=0, seed=1)
        noisy = generate_planted_graph([clique_template(4)], 5, noise_edges=12, seed=1)
        assert noisy.graph.edge_count == base.graph.edge_count + 12

    def test_empty_template_set_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            generate_planted_graph([], copies=1, seed=0)

    def test_long_barbell_has_arm_and_center_roles(self):
        tpl = barbell_template(5, 5)
        assert "bridge-center" in tpl.roles
        assert "bridge-arm-1" in tpl.roles
        planted = generate_planted_graph([tpl], copies=2, seed=0)
        assert planted.graph.node_count == 26
