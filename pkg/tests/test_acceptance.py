"""End-to-end acceptance checks.

Each test covers one numbered criterion and prints a single PASS/FAIL
line (run with ``pytest -s tests/test_acceptance.py`` to see them).
Numeric fixtures live in tests/data/published_metrics.csv; oracle
comparisons are recomputed inline and independently of library code.
"""

import csv
import math
import os
import random
import time

import numpy as np
from scipy.sparse import csr_matrix

from agora.corpus import Document, LabeledCorpus, NON_POLITICAL, POLITICAL, SplitSpec, split_train_test
from agora.dictionary import Dictionary, calibrate_threshold, corpus_ratios, keyness_ll
from agora.evaluation import format_cell, sweep_prob_threshold
from agora.html_extract import HtmlPage, extract_text
from agora.preprocess import PreprocessMode, stem
from agora.sml import FeatureSpace, TrainedModel, lr_gradient, lr_loss, predict_proba, train_model
from agora.benchmark import ALL_MODELS, BenchmarkSpec, run_benchmark

from conftest import POLITICAL_POOL, SPORT_POOL, make_separable_corpus

DATA = os.path.join(os.path.dirname(__file__), "data")

# One political row in the reference metrics duplicates its dataset's
# macro row instead of the class metrics (the two disagree by ~0.03);
# it is excluded from the self-consistency fixtures.
TRANSCRIPTION_SLIPS = {("none", "Di-LL", "DVD")}


def _report(num, ok, detail):
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def load_published():
    with open(os.path.join(DATA, "published_metrics.csv"), encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _f1(p, r):
    return 2 * p * r / (p + r) if p + r else 0.0


def test_criterion_01_f1_self_consistency():
    """Printed political F1s must be reachable from the printed P/R pair."""
    start = time.perf_counter()
    rows = [r for r in load_published() if r["class"] == "political"]
    assert len(rows) >= 66
    failures = []
    for row in rows:
        if (row["mode"], row["model"], row["dataset"]) in TRANSCRIPTION_SLIPS:
            continue
        p, r, f1 = float(row["precision"]), float(row["recall"]), float(row["f1"])
        # printed values are 2-decimal roundings: widen both operands by
        # half an ulp and require the F1 intervals (each +-0.005) to meet
        lo = _f1(max(p - 0.005, 0.0), max(r - 0.005, 0.0))
        hi = _f1(min(p + 0.005, 1.0), min(r + 0.005, 1.0))
        if not (lo - 0.005 <= f1 + 0.005 and f1 - 0.005 <= hi + 0.005):
            failures.append((row["mode"], row["model"], row["dataset"], p, r, f1))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 1.0
    _report(1, ok, f"{len(rows)} political rows, {len(failures)} inconsistent, {elapsed:.2f}s")


def test_criterion_02_macro_average():
    """Every printed macro F1 is the mean of its two class F1s (+-0.015)."""
    start = time.perf_counter()
    by_key = {}
    for row in load_published():
        by_key.setdefault((row["mode"], row["model"], row["dataset"]), {})[row["class"]] = row
    failures = []
    checked = 0
    for key, rows in by_key.items():
        if key in TRANSCRIPTION_SLIPS:
            continue
        mean = (float(rows["political"]["f1"]) + float(rows["non_political"]["f1"])) / 2
        checked += 1
        if abs(mean - float(rows["av"]["f1"])) > 0.015:
            failures.append(key)
    # spot-check the worked example: BNB on WVD without preprocessing
    bnb = by_key[("none", "SML [BNB]", "WVD")]
    example_ok = (
        float(bnb["political"]["f1"]) == 0.22
        and float(bnb["non_political"]["f1"]) == 0.79
        and float(bnb["av"]["f1"]) == 0.51
    )
    elapsed = time.perf_counter() - start
    ok = not failures and example_ok and elapsed < 1.0
    _report(2, ok, f"{checked} macro rows, {len(failures)} off, example {'ok' if example_ok else 'bad'}")


def test_criterion_03_split_reproduction():
    docs = [Document(id=f"p{i}", text="wahl", label=POLITICAL) for i in range(1523)]
    docs += [Document(id=f"n{i}", text="sport", label=NON_POLITICAL) for i in range(2500)]
    corpus = LabeledCorpus.from_documents(docs)
    ok = True
    for seed in (0, 1, 7, 42, 123):
        train, test = split_train_test(corpus, SplitSpec(test_fraction=0.2, seed=seed))
        pol = sum(1 for d in test.documents if d.label == POLITICAL)
        non = len(test.documents) - pol
        if (len(test.documents), pol, non) != (805, 305, 500):
            ok = False
    _report(3, ok, "1523/2500 corpus at 20% -> 805 test docs (305+500) for all seeds")


def _brute_force_theta(ratios, gold):
    best_theta, best_f1 = 0.0, -1.0
    for theta in sorted({0.0, *ratios}):
        f1s = []
        for positive in (POLITICAL, NON_POLITICAL):
            tp = fp = fn = 0
            for r, g in zip(ratios, gold):
                pred = POLITICAL if r >= theta else NON_POLITICAL
                if pred == positive and g == positive:
                    tp += 1
                elif pred == positive:
                    fp += 1
                elif g == positive:
                    fn += 1
            p = tp / (tp + fp) if tp + fp else 0.0
            rc = tp / (tp + fn) if tp + fn else 0.0
            f1s.append(_f1(p, rc))
        macro = sum(f1s) / 2
        if macro > best_f1:
            best_theta, best_f1 = theta, macro
    return best_theta, best_f1


def test_criterion_04_calibration_oracle():
    start = time.perf_counter()
    rng = random.Random(404)
    dictionary = Dictionary(name="pool", entries=frozenset((w,) for w in POLITICAL_POOL))
    vocab = POLITICAL_POOL + SPORT_POOL + ["heute", "stadt", "neu"]
    mismatches = 0
    for trial in range(100):
        n = rng.randrange(4, 201)
        docs = []
        for i in range(n):
            label = POLITICAL if i % 2 == 0 else NON_POLITICAL
            text = " ".join(rng.choice(vocab) for _ in range(rng.randrange(1, 10)))
            docs.append(Document(id=f"c{trial}-{i}", text=text, label=label))
        corpus = LabeledCorpus.from_documents(docs)
        ratios, gold = corpus_ratios(corpus, dictionary, PreprocessMode.NONE)
        want = _brute_force_theta(ratios, gold)
        got = calibrate_threshold(corpus, dictionary, PreprocessMode.NONE)
        if not (math.isclose(got[0], want[0]) and math.isclose(got[1], want[1])):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 10.0
    _report(4, ok, f"100 corpora, {mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_05_keyness_oracle():
    def oracle(a, c, b, d):
        total = (a + b) / (c + d)
        gain = lambda x, n: x * math.log(x / (n * total)) if x else 0.0
        return 2.0 * (gain(a, c) + gain(b, d))

    rng = random.Random(55)
    worst = 0.0
    for _ in range(1000):
        c = rng.randrange(1, 5000)
        d = rng.randrange(1, 5000)
        a = rng.randrange(0, c + 1)
        b = rng.randrange(0, d + 1)
        worst = max(worst, abs(keyness_ll(a, c, b, d) - max(oracle(a, c, b, d), 0.0)))
    symmetric_zero = all(keyness_ll(k, 100 * k + 7, k, 100 * k + 7) == 0.0 for k in (1, 5, 50))
    anchor = abs(keyness_ll(10, 1000, 1, 1000) - 8.5472) <= 1e-3
    ok = worst <= 1e-9 and symmetric_zero and anchor
    _report(5, ok, f"max |delta| {worst:.2e}, symmetric zero {symmetric_zero}, anchor {anchor}")


def _enumerated_posterior(kind, vectors, labels, v, query, alpha=1.0):
    joints = []
    for cls in (NON_POLITICAL, POLITICAL):
        cls_vecs = [vec for vec, lab in zip(vectors, labels) if lab == cls]
        log_joint = math.log(len(cls_vecs) / len(vectors))
        if kind == "mnb":
            counts = [0.0] * v
            for vec in cls_vecs:
                for idx, val in vec:
                    counts[idx] += val
            total = sum(counts)
            for idx, val in query:
                log_joint += val * math.log((counts[idx] + alpha) / (total + alpha * v))
        else:
            present = [0.0] * v
            for vec in cls_vecs:
                for idx, val in vec:
                    if val > 0:
                        present[idx] += 1
            q = {idx for idx, val in query if val > 0}
            for idx in range(v):
                p = (present[idx] + alpha) / (len(cls_vecs) + 2 * alpha)
                log_joint += math.log(p if idx in q else 1.0 - p)
        joints.append(log_joint)
    m = max(joints)
    exp = [math.exp(j - m) for j in joints]
    return exp[1] / sum(exp)


def test_criterion_06_bayes_oracle():
    rng = np.random.default_rng(606)
    worst = 0.0
    for kind in ("mnb", "bnb"):
        for _ in range(100):
            v = int(rng.integers(1, 7))
            n = int(rng.integers(2, 5))
            space = FeatureSpace(vocabulary={f"t{i}": i for i in range(v)})
            labels = [POLITICAL, NON_POLITICAL] + [
                POLITICAL if rng.random() < 0.5 else NON_POLITICAL for _ in range(n - 2)
            ]
            vectors = [
                tuple((i, float(rng.integers(1, 4))) for i in range(v) if rng.random() < 0.6)
                for _ in range(n)
            ]
            query = tuple((i, 1.0) for i in range(v) if rng.random() < 0.5)
            model = train_model(kind, space, vectors, labels)
            got = predict_proba(model, query)
            want = _enumerated_posterior(kind, vectors, labels, v, query)
            worst = max(worst, abs(got - want))
    # two-document fixture: P(political | "wahl") = 9/13
    space = FeatureSpace(vocabulary={"sport": 0, "wahl": 1})
    model = train_model("mnb", space, [((1, 2.0),), ((0, 1.0),)], [POLITICAL, NON_POLITICAL])
    fixture = abs(predict_proba(model, ((1, 1.0),)) - 9 / 13) <= 1e-4
    ok = worst <= 1e-9 and fixture
    _report(6, ok, f"max posterior delta {worst:.2e}, 2-doc fixture 0.6923 {'ok' if fixture else 'bad'}")


def test_criterion_07_gradient_check():
    rng = np.random.default_rng(707)
    x = csr_matrix(rng.normal(size=(20, 8)))
    y = np.where(rng.random(20) < 0.5, 1.0, -1.0)
    eps = 1e-6
    worst = 0.0
    for _ in range(50):
        w = rng.normal(scale=0.5, size=8)
        b = float(rng.normal(scale=0.5))
        l2 = float(rng.uniform(0.0, 0.5))
        grad_w, grad_b = lr_gradient(w, b, x, y, l2)
        numeric = np.empty(9)
        for j in range(8):
            wp, wm = w.copy(), w.copy()
            wp[j] += eps
            wm[j] -= eps
            numeric[j] = (lr_loss(wp, b, x, y, l2) - lr_loss(wm, b, x, y, l2)) / (2 * eps)
        numeric[8] = (lr_loss(w, b + eps, x, y, l2) - lr_loss(w, b - eps, x, y, l2)) / (2 * eps)
        analytic = np.append(grad_w, grad_b)
        rel = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(numeric), 1e-12)
        worst = max(worst, rel)
    ok = worst <= 1e-4
    _report(7, ok, f"50 points, worst relative gradient error {worst:.2e}")


def _separable_spec(eval_names=("held_out",), seed=42, jobs=1):
    corpus = make_separable_corpus(n_political=100, n_non=100, seed=8)
    train, test = split_train_test(corpus, SplitSpec(test_fraction=0.2, seed=3))
    eval_sets = {}
    for i, name in enumerate(eval_names):
        eval_sets[name] = test if i == 0 else make_separable_corpus(20, 20, seed=20 + i)
    curated = Dictionary(name="curated", entries=frozenset((w,) for w in POLITICAL_POOL))
    return BenchmarkSpec(
        train=train,
        eval_sets=eval_sets,
        models=ALL_MODELS,
        modes=tuple(PreprocessMode),
        curated_dictionary=curated,
        top_k=15,
        seed=seed,
        jobs=jobs,
    )


def test_criterion_08_separable_end_to_end():
    start = time.perf_counter()
    cells = run_benchmark(_separable_spec())
    weak = [(c.model_name, c.mode, c.f1_macro) for c in cells if not c.f1_macro >= 0.95]
    elapsed = time.perf_counter() - start
    ok = len(cells) == 8 * 6 and not weak and elapsed < 60.0
    _report(8, ok, f"{len(cells)} cells all macro F1 >= 0.95 ({len(weak)} below), {elapsed:.1f}s")


def test_criterion_09_grid_shape():
    names = ("seta", "setb", "setc")
    first = run_benchmark(_separable_spec(eval_names=names))
    second = run_benchmark(_separable_spec(eval_names=names))
    same = [(c.model_name, c.mode, c.eval_set, c.f1_political, c.f1_macro) for c in first] == [
        (c.model_name, c.mode, c.eval_set, c.f1_political, c.f1_macro) for c in second
    ]
    import re

    cells_ok = all(
        re.fullmatch(r"\d\.\d\d \[\d\.\d\d\]", format_cell(c.f1_political, c.f1_macro))
        for c in first
    )
    example = format_cell(0.76, 0.79) == "0.76 [0.79]"
    ok = len(first) == 144 and same and cells_ok and example
    _report(9, ok, f"{len(first)} cells, deterministic {same}, cell format ok {cells_ok and example}")


def test_criterion_10_threshold_sweep():
    space = FeatureSpace(vocabulary={"x": 0})
    model = TrainedModel(
        kind="lr",
        feature_space=space,
        parameters={"w": np.array([1.0]), "b": 0.0, "l2": 0.0},
        hyperparameters={},
    )
    logit = lambda p: math.log(p / (1 - p))
    data = [(((0, logit(0.16)),), POLITICAL)] * 4 + [(((0, logit(0.12)),), NON_POLITICAL)] * 4
    best_p, table = sweep_prob_threshold(model, data)
    # brute force over the same grid
    grid = [p for p, _ in table]
    probs = [0.16] * 4 + [0.12] * 4
    gold = [POLITICAL] * 4 + [NON_POLITICAL] * 4
    scores = []
    for t in grid:
        tp = sum(1 for pr, g in zip(probs, gold) if pr >= t and g == POLITICAL)
        fp = sum(1 for pr, g in zip(probs, gold) if pr >= t and g == NON_POLITICAL)
        fn = sum(1 for pr, g in zip(probs, gold) if pr < t and g == POLITICAL)
        tn = len(gold) - tp - fp - fn
        f1_pol = _f1(tp / max(tp + fp, 1) if tp + fp else 0.0, tp / (tp + fn) if tp + fn else 0.0)
        f1_non = _f1(tn / (tn + fn) if tn + fn else 0.0, tn / (tn + fp) if tn + fp else 0.0)
        scores.append((t, (f1_pol + f1_non) / 2))
    brute = max(scores, key=lambda r: (r[1], -r[0]))[0]
    ok = best_p == 0.15 and brute == 0.15 and grid == sorted(set(grid))
    _report(10, ok, f"sweep optimum {best_p}, brute force {brute}, grid {grid[0]}..{grid[-1]}")


def test_criterion_11_robust_extraction():
    rng = random.Random(1111)
    crashes = 0
    for _ in range(10_000):
        raw = rng.randbytes(rng.randrange(0, 200))
        try:
            extract_text(HtmlPage(raw=raw))
        except Exception:
            crashes += 1
    html_dir = os.path.join(DATA, "html")
    expected_dir = os.path.join(DATA, "html_expected")
    names = sorted(os.path.splitext(n)[0] for n in os.listdir(html_dir))
    mismatches = 0
    for name in names:
        with open(os.path.join(html_dir, name + ".html"), "rb") as fh:
            raw = fh.read()
        encoding = "latin-1" if name == "latin1_declared" else None
        got = extract_text(HtmlPage(raw=raw, declared_encoding=encoding)).text
        with open(os.path.join(expected_dir, name + ".txt"), encoding="utf-8") as fh:
            if got != fh.read():
                mismatches += 1
    ok = crashes == 0 and len(names) >= 20 and mismatches == 0
    _report(11, ok, f"10000 fuzz inputs, {crashes} crashes; {len(names)} goldens, {mismatches} mismatch")


def test_criterion_12_stemmer_parity():
    pairs = []
    with open(os.path.join(DATA, "cistem_golden.tsv"), encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                word, expected = line.rstrip("\n").split("\t")
                pairs.append((word, expected))
    wrong = sum(1 for w, e in pairs if stem(w) != e)
    not_idempotent = sum(1 for w, _ in pairs if stem(stem(w)) != stem(w))
    ok = len(pairs) >= 200 and wrong == 0 and not_idempotent == 0
    _report(12, ok, f"{len(pairs)} golden pairs, {wrong} wrong, {not_idempotent} non-idempotent")
