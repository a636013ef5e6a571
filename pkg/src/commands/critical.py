from src.kdv.diagnostics.critical import CriticalLengthQuery, critical_lengths
from src.kdv.errors import ConfigurationError
from src.kdv.scenario import parse_real


def cmd_critical(args) -> int:
    try:
        length = float(parse_real(args.length))
    except ValueError:
        raise ConfigurationError(f"Cannot read length {args.length!r}; give a number or a multiple of pi like 2pi")
    query = CriticalLengthQuery(length, args.bound, args.tol)
    matches = critical_lengths(query)
    if not args.quiet:
        if not matches:
            print(f"L = {query.length:.12g} is not critical for k, l <= {query.search_bound} "
                  f"(tolerance {query.tolerance:g})")
        for match in matches:
            print(f"k={match.k} l={match.l} L_kl={match.length:.17g}")
    return 0
