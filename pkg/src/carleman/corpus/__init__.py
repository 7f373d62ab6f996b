"""Fixed verification corpus shipped with the package."""
from importlib import resources

from ..problem import problem_from_dict


def corpus_files():
    root = resources.files(__name__)
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)


def load_corpus():
    """All corpus problems, in file order, as validated problem specs."""
    import json
    return [problem_from_dict(json.loads(p.read_text())) for p in corpus_files()]


def load_named(name):
    for spec in load_corpus():
        if spec.name == name:
            return spec
    raise KeyError(name)
