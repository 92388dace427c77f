def test_reexports_exist_without_import_error():
    import homgrow.domain as d
    # Touch a few re-exports; this fails only on circular imports.
    assert d.IntMatrix and d.IntChainComplex and d.LaurentChainComplex
    assert d.QuotientSpec and d.SquaredLog and d.TowerReport


def test_package_entry_points_import():
    import homgrow
    from homgrow.application import cmd_tower, run_suite
    from homgrow.interfaces.cli import build_parser, main

    assert homgrow.__version__
    assert callable(cmd_tower) and callable(run_suite)
    assert callable(build_parser) and callable(main)
