#!/usr/bin/env python3
"""Materialize the benchmark CSVs used by the test and acceptance suites.

Everything is written to data/ as plain comma-separated files with one
header row, ready for `autosmote run --data ... --label-col ...`.

Two tiers:

  1. Always available (bundled with scikit-learn / statsmodels):
       wisconsin.csv        WDBC breast cancer, 569 x 30, binary
       glass_standin.csv    163-row subset of PMLB "glass2" (real glass
                            chemistry rows shipped inside scikit-learn's
                            test data; binary window/non-window task)
       diabetes_standin.csv Fair (1978) extramarital affairs survey,
                            6366 x 8, binarized participation label
       yeast_standin.csv    ANES 1996 survey, 944 x 8, 7-way party id

  2. Fetched from their public homes when the machine has internet
     access (this is optional; the *_standin files above keep the suite
     runnable offline):
       diabetes.csv         Pima Indians Diabetes, 768 x 8
       glass.csv            UCI Glass Identification, 214 x 9
       yeast.csv            multi-feature yeast set (any public copy
                            with a 'class' column works)

The acceptance runner prefers the real file when present and falls back
to the stand-in, announcing which one it used.
"""

import csv
import gzip
import os
import sys
import urllib.request

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.normpath(os.path.join(HERE, "..", "data"))


def write_csv(name, header, rows):
    path = os.path.join(DATA, name)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows x {len(header) - 1} features)")


def wisconsin():
    from sklearn.datasets import load_breast_cancer

    d = load_breast_cancer()
    header = [n.replace(" ", "_") for n in d.feature_names] + ["diagnosis"]
    rows = [
        list(x) + [d.target_names[y]]
        for x, y in zip(d.data.tolist(), d.target.tolist())
    ]
    write_csv("wisconsin.csv", header, rows)


def glass_standin():
    # scikit-learn vendors a 163-row slice of PMLB's glass2 as OpenML
    # test data (dataset id 40675). Real measurements, binary label.
    import sklearn.datasets

    arff = os.path.join(
        os.path.dirname(sklearn.datasets.__file__),
        "tests", "data", "openml", "id_40675", "data-v1-dl-4965250.arff.gz",
    )
    with gzip.open(arff, "rt") as fh:
        lines = fh.read().splitlines()
    attrs = [
        l.split()[1] for l in lines if l.lower().startswith("@attribute")
    ]
    rows = [
        l.split(",")
        for l in lines
        if l and not l.startswith("@") and not l.startswith("%")
    ]
    write_csv("glass_standin.csv", attrs, rows)


def diabetes_standin():
    import statsmodels.api as sm

    df = sm.datasets.fair.load_pandas().data
    label = (df["affairs"] > 0).map({True: "yes", False: "no"})
    feats = df.drop(columns=["affairs"])
    header = list(feats.columns) + ["class"]
    rows = [list(r) + [y] for r, y in zip(feats.values.tolist(), label)]
    write_csv("diabetes_standin.csv", header, rows)


def yeast_standin():
    import statsmodels.api as sm

    df = sm.datasets.anes96.load_pandas().data
    label = df["PID"].astype(int).astype(str)
    feats = df[["popul", "TVnews", "selfLR", "ClinLR", "DoleLR",
                "age", "educ", "income"]]
    header = list(feats.columns) + ["class"]
    rows = [list(r) + [y] for r, y in zip(feats.values.tolist(), label)]
    write_csv("yeast_standin.csv", header, rows)


def fetch(url, timeout=15):
    with urllib.request.urlopen(url, timeout=timeout) as r:
        return r.read().decode("utf-8")


def diabetes_real():
    url = ("https://raw.githubusercontent.com/jbrownlee/Datasets/master/"
           "pima-indians-diabetes.data.csv")
    text = fetch(url)
    header = ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age",
              "class"]
    rows = [l.split(",") for l in text.splitlines() if l.strip()]
    write_csv("diabetes.csv", header, rows)


def glass_real():
    url = ("https://archive.ics.uci.edu/ml/machine-learning-databases/"
           "glass/glass.data")
    text = fetch(url)
    header = ["RI", "Na", "Mg", "Al", "Si", "K", "Ca", "Ba", "Fe", "class"]
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        cells = line.split(",")
        rows.append(cells[1:])  # drop the id column
    write_csv("glass.csv", header, rows)


def main():
    os.makedirs(DATA, exist_ok=True)
    wisconsin()
    glass_standin()
    diabetes_standin()
    yeast_standin()
    for name, fn in [("diabetes.csv", diabetes_real), ("glass.csv", glass_real)]:
        if os.path.exists(os.path.join(DATA, name)):
            print(f"{name} already present, skipping fetch")
            continue
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report and continue
            print(f"could not fetch {name} ({exc!r}); "
                  f"the suite will use the stand-in", file=sys.stderr)


if __name__ == "__main__":
    main()
