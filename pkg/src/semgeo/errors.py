"""Exception types shared across the package."""


class SemgeoError(Exception):
    """Base class for all semgeo errors."""


# -- datasets ---------------------------------------------------------------

class DatasetError(SemgeoError):
    pass


class MalformedLine(DatasetError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class EmptyDataset(DatasetError):
    pass


class DuplicateItem(DatasetError):
    def __init__(self, text: str, lang: str, level: str):
        super().__init__(f"duplicate item ({text!r}, {lang}, {level})")
        self.key = (text, lang, level)


class ManifestMismatch(DatasetError):
    def __init__(self, category: str, expected: int, actual: int):
        super().__init__(
            f"category {category!r}: manifest says {expected}, file has {actual}"
        )
        self.category = category
        self.expected = expected
        self.actual = actual


class DanglingPair(DatasetError):
    def __init__(self, pair_id: str, reason: str):
        super().__init__(f"pair {pair_id!r}: {reason}")
        self.pair_id = pair_id


# -- embedding providers ----------------------------------------------------

class ProviderError(SemgeoError):
    pass


class AuthMissing(ProviderError):
    def __init__(self, env_name: str):
        super().__init__(f"auth token env var {env_name!r} is not set")
        self.env_name = env_name


class HttpStatus(ProviderError):
    def __init__(self, code: int, detail: str = ""):
        super().__init__(f"provider returned HTTP {code}: {detail}")
        self.code = code


class ProviderTimeout(ProviderError):
    def __init__(self, attempts: int):
        super().__init__(f"provider timed out after {attempts} attempts")
        self.attempts = attempts


class DimensionMismatch(ProviderError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"embedding dim changed mid-call: {expected} -> {got}")
        self.expected = expected
        self.got = got


class ZeroRow(SemgeoError):
    def __init__(self, index: int):
        super().__init__(f"row {index} has zero L2 norm")
        self.index = index


# -- geometry ---------------------------------------------------------------

class GeometryError(SemgeoError):
    pass


class NonFiniteInput(GeometryError):
    pass


class KTooLarge(GeometryError):
    def __init__(self, k: int, n: int):
        super().__init__(f"k={k} needs at least {k + 1} points, got {n}")
        self.k = k
        self.n = n


class PerplexityTooLarge(GeometryError):
    def __init__(self, perplexity: float, n: int):
        super().__init__(f"perplexity {perplexity} too large for n={n} (need < (n-1)/3)")


class DisconnectedGraph(GeometryError):
    def __init__(self, component_count: int):
        super().__init__(f"neighbor graph has {component_count} components")
        self.component_count = component_count


class DegenerateKernel(GeometryError):
    pass


class UnimplementedMethod(GeometryError):
    def __init__(self, name: str):
        super().__init__(
            f"method {name!r} is reserved but not implemented; "
            "available: phate, pca, cmds, kpca, isomap, lle, spectral, tsne"
        )
        self.name = name


# -- diagnostics ------------------------------------------------------------

class DiagnosticsError(SemgeoError):
    pass


class SingleLabel(DiagnosticsError):
    pass


class TooFewPoints(DiagnosticsError):
    def __init__(self, needed: int, got: int):
        super().__init__(f"need at least {needed} points, got {got}")


class TooFewPairs(DiagnosticsError):
    def __init__(self, needed: int, got: int):
        super().__init__(f"need at least {needed} complete pairs, got {got}")
