#!/usr/bin/env python3
"""Regenerates the JSON fixtures under data/fixtures from bracket markup.

Markup: [surface words|Type]. Tokens are whitespace separated. Unless a
sentence lists its relations explicitly, every ordered entity pair is
labeled from the type-pair table below (noRelation when absent). Listed
relations also get noRelation for the remaining pairs, except in apt29.
"""
import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent

ACTORS = ["HackOrg", "OffAct", "Exp", "Way", "Tool", "SamFile"]
ONTOLOGY = {
    "analyses": (["SecTeam"], ["SamFile"]),
    "associatedWith": (["HackOrg"], ["HackOrg"]),
    "discovers": (["SecTeam"], ["HackOrg"]),
    "discoveredBy": (["HackOrg"], ["SecTeam"]),
    "hasAttackTime": (["HackOrg", "OffAct", "Way"], ["Time"]),
    "hasCharacteristics": (ACTORS, ["Features"]),
    "locatedAt": (["Org"], ["Area"]),
    "monitors": (["SecTeam"], ["Org", "Area", "Tool", "Exp"]),
    "monitoredBy": (["Org", "Area", "Tool", "Exp"], ["SecTeam"]),
    "motivates": (["Purp"], ["HackOrg", "OffAct", "Exp", "Way"]),
    "motivatedBy": (["HackOrg", "OffAct", "Exp", "Way"], ["Purp"]),
    "uses": (ACTORS, ["Tool", "OffAct", "Exp", "SamFile", "Way"]),
    "usedBy": (["Features", "OffAct", "Exp", "Way", "Tool", "SamFile"], ACTORS),
    "targets": (ACTORS, ["Area", "Org", "SecTeam"]),
    "targetedBy": (["Area", "Org", "SecTeam"], ACTORS),
}

PAIR_RELATION = {
    ("HackOrg", "Tool"): "uses", ("Tool", "HackOrg"): "usedBy",
    ("HackOrg", "OffAct"): "uses", ("OffAct", "HackOrg"): "usedBy",
    ("HackOrg", "Exp"): "uses", ("Exp", "HackOrg"): "usedBy",
    ("HackOrg", "SamFile"): "uses", ("SamFile", "HackOrg"): "usedBy",
    ("HackOrg", "Org"): "targets", ("Org", "HackOrg"): "targetedBy",
    ("HackOrg", "Area"): "targets", ("Area", "HackOrg"): "targetedBy",
    ("Tool", "Org"): "targets", ("Org", "Tool"): "targetedBy",
    ("HackOrg", "Time"): "hasAttackTime",
    ("HackOrg", "SecTeam"): "discoveredBy", ("SecTeam", "HackOrg"): "discovers",
    ("SecTeam", "SamFile"): "analyses",
    ("HackOrg", "Purp"): "motivatedBy", ("Purp", "HackOrg"): "motivates",
    ("Org", "Area"): "locatedAt",
}

CTI_SAMPLE = [
    "[APT28|HackOrg] used [X-Agent|Tool] against [defense contractors|Org] .",
    "[Lazarus Group|HackOrg] targeted [South Korean banks|Org] in [2016|Time] .",
    "[FireEye|SecTeam] attributed the intrusion to [APT29|HackOrg] .",
    "[Turla|HackOrg] relies on [Snake|Tool] to keep access .",
    "[APT33|HackOrg] sent [spearphishing emails|OffAct] to [aviation firms|Org] .",
    "[Kaspersky|SecTeam] analysed [invoice.doc|SamFile] from the campaign .",
    "[Sandworm|HackOrg] attacked [Ukraine|Area] with [BlackEnergy|Tool] .",
    "[APT10|HackOrg] compromised [managed service providers|Org] since [2014|Time] .",
    "[OceanLotus|HackOrg] exploited [CVE-2017-11882|Exp] in [Vietnam|Area] .",
    "[Emotet|Tool] spread through [healthcare providers|Org] last year .",
    "[FIN7|HackOrg] deployed [Carbanak|Tool] against [restaurant chains|Org] .",
    "[Symantec|SecTeam] tracked [Dragonfly|HackOrg] for several years .",
    "[APT3|HackOrg] weaponized [CVE-2014-1776|Exp] to breach [aerospace companies|Org] .",
    "[Equation Group|HackOrg] was active as early as [2001|Time] .",
    "[Kimsuky|HackOrg] seeks [intelligence collection|Purp] on [nuclear policy experts|Org] .",
    "[MuddyWater|HackOrg] delivered [POWERSTATS|Tool] to targets in [Turkey|Area] .",
    "[Gamaredon|HackOrg] mailed [update.exe|SamFile] to [government agencies|Org] .",
    "[TrickBot|Tool] infected [financial institutions|Org] across [Europe|Area] .",
    "[ESET|SecTeam] uncovered [Winnti Group|HackOrg] activity in [2019|Time] .",
    "[APT41|HackOrg] abused [CVE-2019-19781|Exp] to reach [telecom operators|Org] .",
    "[Charming Kitten|HackOrg] ran [credential harvesting|OffAct] against [journalists|Org] .",
    "[Patchwork|HackOrg] copied code into [BADNEWS|Tool] for [espionage|Purp] .",
    "[Tick|HackOrg] focused on [Japan|Area] with [Daserf|Tool] .",
    "[Palo Alto Networks|SecTeam] examined [loader.dll|SamFile] used in the attack .",
    "[APT32|HackOrg] targeted [automotive companies|Org] in [2017|Time] .",
    "[DarkHotel|HackOrg] compromised [hotel networks|Org] in [Asia|Area] .",
    "[Cobalt Strike|Tool] was found on [university servers|Org] .",
    "[Silence|HackOrg] used [TrueBot|Tool] against [Russian banks|Org] .",
    "[Ke3chang|HackOrg] sent [malicious attachments|OffAct] to [foreign ministries|Org] .",
    "[Trend Micro|SecTeam] linked [Earth Lusca|HackOrg] to the breach .",
    "[Leviathan|HackOrg] exploited [CVE-2017-0199|Exp] against [maritime firms|Org] .",
    "[APT19|HackOrg] leveraged [Derusbi|Tool] during [2015|Time] .",
    "[Naikon|HackOrg] gathered [political intelligence|Purp] about [Philippines|Area] .",
    "[Mustang Panda|HackOrg] dropped [PlugX|Tool] through [lure documents|OffAct] .",
    "[BlackTech|HackOrg] went after [Taiwan|Area] with [TSCookie|Tool] .",
    "[Microsoft|SecTeam] disrupted [Nobelium|HackOrg] infrastructure .",
    "[Hafnium|HackOrg] abused [CVE-2021-26855|Exp] on [email servers|Org] .",
    "[Dridex|Tool] stole credentials from [retail companies|Org] .",
    "[Magic Hound|HackOrg] used [report.xls|SamFile] to infect [energy firms|Org] .",
    "[Cisco Talos|SecTeam] reverse engineered [payload.bin|SamFile] .",
    "[APT37|HackOrg] aimed [ROKRAT|Tool] at [defectors|Org] in [2018|Time] .",
    "[Elfin|HackOrg] struck [petrochemical plants|Org] in [Saudi Arabia|Area] .",
    "[Wizard Spider|HackOrg] pushed [Ryuk|Tool] into [hospitals|Org] .",
    "[Moonlight Maze|OffAct] was run by [Turla|HackOrg] for [espionage|Purp] .",
    "[Stuxnet|Tool] damaged [uranium enrichment facilities|Org] .",
    "[CrowdStrike|SecTeam] observed [Fancy Bear|HackOrg] in [2016|Time] .",
    "[Chafer|HackOrg] hit [airlines|Org] using [Remexi|Tool] .",
    "[Scarlet Mimic|HackOrg] sent [phishing links|OffAct] to [activists|Org] in [Tibet|Area] .",
    "[Zirconium|HackOrg] exploited [CVE-2017-0005|Exp] in [2017|Time] .",
    "[Dukes|HackOrg] relied on [MiniDuke|Tool] against [embassies|Org] in [Europe|Area] .",
]

APT29 = "[APT29|HackOrg] uses [Mimikatz|Tool] , targeting [XYZ Bank|Org]"
APT29_RELATIONS = [(0, "uses", 1), (0, "targets", 2), (1, "targets", 2)]

# Grouped entities in row 3 are split into separate spans.
REPORT = [
    ("In this same time frame , [APT10|HackOrg] also targeted a "
     "[U.S. law firm|Org] and an international [apparel company|Org] , likely "
     "to [gather information|Purp] for commercial advantage .",
     [(0, "targets", 1), (0, "targets", 2), (0, "motivates", 3)]),
    ("[Carbanak|HackOrg] is a cybercriminal group that has used "
     "[Carbanak malware|Tool] to target [financial institutions|Org] since at "
     "least [2013|Time] .",
     [(0, "uses", 1), (0, "targets", 2), (0, "hasAttackTime", 3),
      (1, "targets", 2), (1, "hasAttackTime", 3)]),
    ("[Night Dragon|HackOrg] was a [cyber espionage campaign|OffAct] that "
     "targeted [oil|Org] , [energy|Org] , [petrochemical companies|Org] , along "
     "with individuals and executives in [Kazakhstan|Area] , [Taiwan|Area] , "
     "[Greece|Area] , [the United States|Area]",
     [(0, "uses", 1)] + [(h, "targets", t) for h in (0, 1) for t in range(2, 9)]),
]


def parse_markup(markup):
    tokens, entities = [], []
    rest = markup
    while rest:
        open_at = rest.find("[")
        if open_at < 0:
            tokens += rest.split()
            break
        tokens += rest[:open_at].split()
        close_at = rest.index("]", open_at)
        surface, etype = rest[open_at + 1:close_at].rsplit("|", 1)
        words = surface.split()
        entities.append([len(tokens), len(tokens) + len(words), etype])
        tokens += words
        rest = rest[close_at + 1:]
    labels = ["O"] * len(tokens)
    for start, end, etype in entities:
        labels[start] = "B-" + etype
        for i in range(start + 1, end):
            labels[i] = "I-" + etype
    return tokens, entities, labels


def record(markup, relations=None, all_pairs=True):
    tokens, entities, labels = parse_markup(markup)
    given = {(h, t): r for h, r, t in (relations or [])}
    if not all_pairs:
        return {"text": " ".join(tokens), "entities": entities,
                "relations": [list(r) for r in relations],
                "entity_labels": labels}
    triples = []
    for h in range(len(entities)):
        for t in range(len(entities)):
            if h == t:
                continue
            if relations is not None:
                rel = given.get((h, t), "noRelation")
            else:
                rel = PAIR_RELATION.get((entities[h][2], entities[t][2]),
                                        "noRelation")
            triples.append([h, rel, t])
    if relations is not None:
        missing = set(given) - {(h, t) for h, _, t in triples}
        assert not missing, missing
    return {"text": " ".join(tokens), "entities": entities,
            "relations": triples, "entity_labels": labels}


def dump(name, doc):
    path = HERE / name
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print("wrote", path.relative_to(HERE))


def main():
    for (h, t), rel in PAIR_RELATION.items():
        domain, rng = ONTOLOGY[rel]
        assert h in domain and t in rng, (h, rel, t)
    assert len(CTI_SAMPLE) == 50
    dump("ontology.json", {k: {"domain": sorted(d), "range": sorted(r)}
                           for k, (d, r) in sorted(ONTOLOGY.items())})
    dump("fixtures/apt29.json", [record(APT29, APT29_RELATIONS, all_pairs=False)])
    dump("fixtures/report_triples.json", [record(m, r) for m, r in REPORT])
    dump("fixtures/cti_sample50.json", [record(m) for m in CTI_SAMPLE])


if __name__ == "__main__":
    main()
