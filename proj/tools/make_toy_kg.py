#!/usr/bin/env python3
"""Regenerate the bundled toy knowledge graph and its evaluation datasets.

Usage: tools/make_toy_kg.py [output_dir]   (default: data/toy)
"""
import random
import sys
from pathlib import Path

R = "http://toy.example.org/resource/"
O = "http://toy.example.org/ontology/"
OWL = "http://www.w3.org/2002/07/owl#"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
SUBPROP = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf"

CONTINENTS = ["Norland", "Suderra"]
COUNTRIES = {"Norland": ["Avalia", "Brevonia", "Caldora"], "Suderra": ["Dravia", "Estmark", "Forsa"]}
CITIES_PER_COUNTRY = 4
PEOPLE = 110
ORGS = 12
WORKS = 36


def nt(s, p, o):
    return f"<{R}{s}> <{O}{p}> <{R}{o}> .\n"


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/toy")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(7)
    triples = []

    country_of, continent_of = {}, {}
    for cont in CONTINENTS:
        for c in COUNTRIES[cont]:
            continent_of[c] = cont
            triples.append(nt(c, "locatedIn", cont))
    cities = []
    for c in continent_of:
        for i in range(CITIES_PER_COUNTRY):
            city = f"{c}_City{i}"
            cities.append(city)
            country_of[city] = c
            # capitals only carry the more specific link
            triples.append(nt(city, "capitalOf" if i == 0 else "locatedIn", c))

    people = [f"Person{i:03d}" for i in range(PEOPLE)]
    birth = {}
    for p in people:
        birth[p] = rng.choice(cities)
        triples.append(nt(p, "birthPlace", birth[p]))

    orgs = [f"Org{i:02d}" for i in range(ORGS)]
    for o in orgs:
        triples.append(nt(o, "basedIn", rng.choice(cities)))
    for p in people:
        if rng.random() < 0.6:
            triples.append(nt(p, "memberOf", rng.choice(orgs)))

    shuffled = people[:]
    rng.shuffle(shuffled)
    # spouse links: a few stated both ways, most only one way
    for i in range(0, 60, 2):
        a, b = shuffled[i], shuffled[i + 1]
        triples.append(nt(a, "spouse", b))
        if i < 16:
            triples.append(nt(b, "spouse", a))

    # academic lineage: advisor edges, and a handful of doctoralStudent edges
    for i in range(60, 100):
        student, adv = shuffled[i], shuffled[rng.randrange(0, 60)]
        triples.append(nt(student, "advisor", adv) if i % 4 else nt(adv, "doctoralStudent", student))

    for i in range(WORKS):
        w = f"Work{i:02d}"
        triples.append(nt(w, "author", rng.choice(people)))
        triples.append(nt(w, "setIn", rng.choice(cities)))

    (out / "graph.nt").write_text("".join(sorted(set(triples))))
    (out / "tbox.nt").write_text(
        f"<{O}locatedIn> <{RDF_TYPE}> <{OWL}TransitiveProperty> .\n"
        f"<{O}spouse> <{RDF_TYPE}> <{OWL}SymmetricProperty> .\n"
        f"<{O}advisor> <{OWL}inverseOf> <{O}doctoralStudent> .\n"
        f"<{O}capitalOf> <{SUBPROP}> <{O}locatedIn> .\n"
    )
    (out / "tbox_empty.nt").write_text("# no axioms\n")

    labelled = [p for p in people if rng.random() < 0.7]
    (out / "classification.tsv").write_text(
        "entity\tlabel\n" + "".join(f"<{R}{p}>\t{continent_of[country_of[birth[p]]]}\n" for p in labelled)
    )

    base = {c: 10.0 * (k + 1) for k, c in enumerate(continent_of)}
    (out / "regression.tsv").write_text(
        "entity\tvalue\n" + "".join(f"<{R}{c}>\t{base[country_of[c]] + rng.uniform(-1, 1):.3f}\n" for c in cities)
    )

    def city_ranking(main):
        same_country = [c for c in cities if c != main and country_of[c] == country_of[main]]
        same_cont = [c for c in cities if country_of[c] != country_of[main]
                     and continent_of[country_of[c]] == continent_of[country_of[main]]]
        other = [c for c in cities if continent_of[country_of[c]] != continent_of[country_of[main]]]
        return [rng.choice(same_country), rng.choice(same_cont), rng.choice(other)]

    blocks = []
    for main in rng.sample(cities, 8):
        blocks.append(f"main:\t<{R}{main}>\n" + "".join(f"<{R}{c}>\n" for c in city_ranking(main)))
    (out / "similarity.tsv").write_text("\n".join(blocks))

    blocks = []
    for main in rng.sample(people, 8):
        home = birth[main]
        far = rng.choice([c for c in cities if continent_of[country_of[c]] != continent_of[country_of[home]]])
        blocks.append(f"main:\t<{R}{main}>\n<{R}{home}>\n<{R}{country_of[home]}>\n<{R}{far}>\n")
    (out / "relatedness.tsv").write_text("\n".join(blocks))

    docs = {}
    for i, country in enumerate(list(continent_of) * 2):
        local = [c for c in cities if country_of[c] == country]
        docs[f"d{i:02d}"] = (country, rng.sample(local, 2) + [rng.choice([p for p in people if birth[p] in local] or people)])
    lines = [f"doc\t{d}\t" + ",".join(f"<{R}{e}>" for e in ents) + "\n" for d, (_, ents) in docs.items()]
    ids = list(docs)
    for _ in range(40):
        a, b = rng.sample(ids, 2)
        ca, cb = docs[a][0], docs[b][0]
        score = 1.0 if ca == cb else 0.5 if continent_of[ca] == continent_of[cb] else 0.0
        lines.append(f"gold\t{a}\t{b}\t{score + rng.uniform(-0.1, 0.1):.3f}\n")
    (out / "docsim.tsv").write_text("".join(lines))

    common = (
        "[walk]\nwalks = 50\ndepth = 4\n\n"
        "[train]\ndim = 32\nwindow = 5\nepochs = 5\nnegatives = 5\ndeterministic = true\n\n"
        "[eval]\nfolds = 5\n"
        "classification = classification.tsv\nregression = regression.tsv\n"
        "similarity = similarity.tsv\nrelatedness = relatedness.tsv\ndocsim = docsim.tsv\n\n"
        "[compare]\ntop_k = 10\n"
    )
    for name, tbox, outdir in [("pipeline.conf", "tbox.nt", "run"), ("pipeline_empty_tbox.conf", "tbox_empty.nt", "run_empty")]:
        (out / name).write_text(
            f"[pipeline]\ngraph = graph.nt\ntbox = {tbox}\noutput = {outdir}\nseed = 42\n\n" + common
        )


if __name__ == "__main__":
    main()
