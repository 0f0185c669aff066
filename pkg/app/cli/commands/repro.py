from app.cli.deps import emit
from app.core.graphs import graph_hash
from app.core.verify import cell, reproduce_table, table2_certificate, table2_instance
from app.models.schemas import CertificateReport


def register(subparsers) -> None:
    parser = subparsers.add_parser("repro", help="replay a golden trace and compare it cell by cell")
    parser.add_argument("table", choices=["table1", "table2"])
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    verdict = reproduce_table(args.table)
    emit(verdict)
    if args.table == "table2":
        certificate = table2_certificate()
        if certificate is not None:
            graph, algo = table2_instance()
            cfg = certificate.configuration
            emit(CertificateReport(
                algorithm=algo.name,
                graph_hash=graph_hash(graph),
                prefix=[list(b) for b in certificate.prefix],
                period=[list(b) for b in certificate.period],
                first_seen=certificate.first_seen,
                repeat_at=certificate.repeat_at,
                cycle_length=certificate.cycle_length,
                period_length=certificate.period_length,
                undecided=list(certificate.undecided),
                states={v: {"old": cell(cfg.old[v]), "new": cell(cfg.new[v])} for v in certificate.undecided},
            ))
    return 0 if verdict else 1
