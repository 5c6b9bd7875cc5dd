"""Download the three public benchmark tables into data/raw/ and print the
prepare commands that binarize them into data/.

Needs network access; the prepared CSVs it leads to are what the
dataset-dependent acceptance tests look for:

    data/compas-binary.csv, data/german-binary.csv, data/adult-binary.csv
"""

import csv
import io
import os
import urllib.request

RAW_DIR = os.path.join("data", "raw")

SOURCES = {
    "compas": (
        "https://raw.githubusercontent.com/propublica/compas-analysis/"
        "master/compas-scores-two-years.csv"
    ),
    "german": (
        "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/"
        "german/german.data"
    ),
    "adult": (
        "https://archive.ics.uci.edu/ml/machine-learning-databases/adult/"
        "adult.data"
    ),
}

ADULT_COLUMNS = [
    "age",
    "workclass",
    "fnlwgt",
    "education",
    "education-num",
    "marital-status",
    "occupation",
    "relationship",
    "race",
    "sex",
    "capital-gain",
    "capital-loss",
    "hours-per-week",
    "native-country",
    "income",
]

GERMAN_COLUMNS = [f"a{i}" for i in range(1, 21)] + ["label"]


def fetch(name, url):
    path = os.path.join(RAW_DIR, f"{name}.csv")
    if os.path.exists(path):
        print(f"{path} already present")
        return path
    print(f"downloading {url}")
    with urllib.request.urlopen(url, timeout=60) as response:
        body = response.read().decode("utf-8", errors="replace")
    if name == "german":
        # whitespace-separated, no header; label is 1 (good) / 2 (bad)
        rows = [line.split() for line in body.splitlines() if line.strip()]
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(GERMAN_COLUMNS)
        writer.writerows(rows)
        body = buffer.getvalue()
    elif name == "adult":
        rows = [
            [cell.strip() for cell in line.split(",")]
            for line in body.splitlines()
            if line.strip()
        ]
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(ADULT_COLUMNS)
        writer.writerows(rows)
        body = buffer.getvalue()
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(body)
    print(f"wrote {path}")
    return path


def main():
    os.makedirs(RAW_DIR, exist_ok=True)
    for name, url in SOURCES.items():
        fetch(name, url)
    print(
        "\nnow binarize each table (labels map to 0/1; sensitive and "
        "leakage-prone columns are dropped by the recipes):"
    )
    for name in SOURCES:
        print(
            f"  dpgrl prepare --input data/raw/{name}.csv "
            f"--recipe recipes/{name}.txt --output data/{name}-binary.csv"
        )


if __name__ == "__main__":
    main()
