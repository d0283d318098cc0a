"""CSV dataset loading, JSON model persistence, splitting, reindexing."""

from __future__ import annotations

import json
import math
import random

import pytest

from nbxplain import (
    DataFormatError,
    Dataset,
    DomainMismatch,
    EmptyDataset,
    FeatureSpec,
    SingleClassDataset,
    load_dataset,
    load_model,
    model_from_dict,
    model_to_dict,
    reindex_dataset,
    save_dataset,
    save_model,
    split_dataset,
    train,
)

from conftest import make_random_dataset


def write(path, text):
    path.write_text(text)
    return path


BASIC_CSV = "color,size,label\nred,small,yes\nblue,big,no\nred,big,yes\n"


class TestLoadDataset:
    def test_basic_shape(self, tmp_path):
        data = load_dataset(write(tmp_path / "d.csv", BASIC_CSV))
        assert [f.name for f in data.features] == ["color", "size"]
        assert data.features[0].domain == ("blue", "red")
        assert data.classes == ("no", "yes")
        assert len(data.rows) == 3
        # rows are stored as value/class indices into the sorted domains;
        # "red,small,yes" encodes against ("blue","red") and ("big","small")
        assert data.rows[0] == ((1, 1), 1)

    def test_domain_collects_values_from_every_row(self, tmp_path):
        text = "f,label\na,yes\nb,no\nc,yes\n"
        data = load_dataset(write(tmp_path / "d.csv", text))
        assert data.features[0].domain == ("a", "b", "c")

    def test_zero_byte_file(self, tmp_path):
        with pytest.raises(EmptyDataset):
            load_dataset(write(tmp_path / "d.csv", ""))

    def test_header_only_file(self, tmp_path):
        with pytest.raises(EmptyDataset):
            load_dataset(write(tmp_path / "d.csv", "a,b,label\n"))

    def test_single_class(self, tmp_path):
        text = "f,label\na,yes\nb,yes\n"
        with pytest.raises(SingleClassDataset):
            load_dataset(write(tmp_path / "d.csv", text))

    def test_three_classes(self, tmp_path):
        text = "f,label\na,x\nb,y\nc,z\n"
        with pytest.raises(DataFormatError, match="3"):
            load_dataset(write(tmp_path / "d.csv", text))

    def test_ragged_row_reports_line_number(self, tmp_path):
        text = "a,b,label\n1,2,yes\n1,no\n2,2,yes\n"
        with pytest.raises(DataFormatError, match="line 3"):
            load_dataset(write(tmp_path / "d.csv", text))

    def test_duplicate_feature_names(self, tmp_path):
        text = "f,f,label\na,b,yes\nc,d,no\n"
        with pytest.raises(DataFormatError, match="duplicate"):
            load_dataset(write(tmp_path / "d.csv", text))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_dataset(tmp_path / "absent.csv")


class TestSaveDataset:
    def test_round_trip(self, tmp_path):
        rng = random.Random(3)
        data = make_random_dataset(rng, 5, num_rows=40)
        path = tmp_path / "out.csv"
        save_dataset(data, path)
        again = load_dataset(path)
        assert again.classes == data.classes
        assert [f.name for f in again.features] == [f.name for f in data.features]
        assert again.rows == tuple(data.rows)

    def test_written_header_uses_class_name(self, tmp_path):
        data = Dataset(
            features=(FeatureSpec("f", ("a", "b")),),
            classes=("n", "y"),
            rows=(((0,), 0), ((1,), 1)),
        )
        path = tmp_path / "out.csv"
        save_dataset(data, path, class_name="target")
        assert path.read_text().splitlines()[0] == "f,target"


class TestSplit:
    def test_deterministic_for_a_seed(self):
        rng = random.Random(9)
        data = make_random_dataset(rng, 4, num_rows=50)
        a = split_dataset(data, train_fraction=0.8, seed=5)
        b = split_dataset(data, train_fraction=0.8, seed=5)
        assert a[0].rows == b[0].rows and a[1].rows == b[1].rows

    def test_partition_is_exact(self):
        rng = random.Random(10)
        data = make_random_dataset(rng, 4, num_rows=50)
        tr, te = split_dataset(data, train_fraction=0.8, seed=1)
        assert len(tr.rows) == 40 and len(te.rows) == 10
        assert sorted(tr.rows + te.rows) == sorted(data.rows)

    def test_rows_keep_dataset_order_within_each_part(self):
        data = Dataset(
            features=(FeatureSpec("f", ("a", "b", "c", "d", "e", "f")),),
            classes=("n", "y"),
            rows=tuple(((k,), k % 2) for k in range(6)),
        )
        tr, te = split_dataset(data, train_fraction=0.5, seed=2)
        for part in (tr, te):
            indices = [data.rows.index(r) for r in part.rows]
            assert indices == sorted(indices)

    def test_fraction_validated(self):
        rng = random.Random(12)
        data = make_random_dataset(rng, 3, num_rows=10)
        for bad in (0.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                split_dataset(data, train_fraction=bad, seed=0)

    def test_tiny_dataset_keeps_one_row_per_side(self):
        data = Dataset(
            features=(FeatureSpec("f", ("a", "b")),),
            classes=("n", "y"),
            rows=(((0,), 0), ((1,), 1)),
        )
        tr, te = split_dataset(data, train_fraction=0.1, seed=0)
        assert len(tr.rows) >= 1 and len(te.rows) >= 1


class TestModelJson:
    def test_round_trip_is_exact(self, tmp_path):
        rng = random.Random(21)
        data = make_random_dataset(rng, 6, num_rows=60)
        model = train(data)
        path = tmp_path / "m.json"
        save_model(model, path)
        again = load_model(path)
        assert again == model

    def test_file_layout(self, tmp_path):
        rng = random.Random(22)
        model = train(make_random_dataset(rng, 3, num_rows=30))
        path = tmp_path / "m.json"
        save_model(model, path)
        text = path.read_text()
        assert text.endswith("\n")
        raw = json.loads(text)
        assert set(raw) == {"classes", "features", "log_prior", "log_likelihood"}
        assert all(set(f) == {"name", "domain"} for f in raw["features"])

    def test_unknown_top_level_key(self):
        raw = model_to_dict(train(make_random_dataset(random.Random(23), 2)))
        raw["extra"] = 1
        with pytest.raises(DataFormatError, match="extra"):
            model_from_dict(raw)

    def test_missing_key(self):
        raw = model_to_dict(train(make_random_dataset(random.Random(24), 2)))
        del raw["log_prior"]
        with pytest.raises(DataFormatError):
            model_from_dict(raw)

    def test_non_finite_entry_rejected(self):
        raw = model_to_dict(train(make_random_dataset(random.Random(25), 2)))
        raw["log_prior"] = [raw["log_prior"][0], -math.inf]
        with pytest.raises(DataFormatError):
            model_from_dict(raw)

    def test_shape_mismatch_rejected(self):
        raw = model_to_dict(train(make_random_dataset(random.Random(26), 2)))
        raw["log_likelihood"][0] = raw["log_likelihood"][0][:-1]
        with pytest.raises(DataFormatError):
            model_from_dict(raw)

    def test_wrong_class_count(self):
        raw = model_to_dict(train(make_random_dataset(random.Random(27), 2)))
        raw["classes"] = ["a", "b", "c"]
        with pytest.raises(DataFormatError):
            model_from_dict(raw)

    def test_malformed_json_file(self, tmp_path):
        path = write(tmp_path / "m.json", "{not json")
        with pytest.raises(DataFormatError):
            load_model(path)

    def test_non_object_document(self, tmp_path):
        path = write(tmp_path / "m.json", "[1, 2]\n")
        with pytest.raises(DataFormatError):
            load_model(path)


class TestReindex:
    def test_identity_when_domains_match(self):
        rng = random.Random(31)
        data = make_random_dataset(rng, 4, num_rows=40)
        model = train(data)
        assert reindex_dataset(data, model).rows == data.rows

    def test_translates_against_model_domains(self, tmp_path):
        # training data saw only a/b; a dataset over b alone must re-encode
        full = load_dataset(
            write(tmp_path / "full.csv", "f,label\na,yes\nb,no\na,no\nb,yes\n")
        )
        model = train(full)
        partial = load_dataset(write(tmp_path / "p.csv", "f,label\nb,no\nb,yes\n"))
        assert partial.rows[0] == ((0,), 0)
        fixed = reindex_dataset(partial, model)
        assert fixed.rows[0] == ((1,), 0)
        assert fixed.features == model.features

    def test_unknown_value_label(self, tmp_path):
        full = load_dataset(
            write(tmp_path / "full.csv", "f,label\na,yes\nb,no\n")
        )
        model = train(full)
        other = load_dataset(write(tmp_path / "o.csv", "f,label\nc,yes\nb,no\n"))
        with pytest.raises(DomainMismatch, match="'c'"):
            reindex_dataset(other, model)

    def test_feature_name_mismatch(self, tmp_path):
        full = load_dataset(write(tmp_path / "full.csv", "f,label\na,yes\nb,no\n"))
        model = train(full)
        other = load_dataset(write(tmp_path / "o.csv", "g,label\na,yes\nb,no\n"))
        with pytest.raises(DomainMismatch):
            reindex_dataset(other, model)

    def test_unknown_class_label(self, tmp_path):
        full = load_dataset(write(tmp_path / "full.csv", "f,label\na,yes\nb,no\n"))
        model = train(full)
        other = load_dataset(
            write(tmp_path / "o.csv", "f,label\na,maybe\nb,no\n")
        )
        with pytest.raises(DomainMismatch):
            reindex_dataset(other, model)
