"""Smoke test for the qaslopes extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/qaslopes-*.whl
"""
import json

import qaslopes


def main():
    k = qaslopes.TorusKnot(5, 3)
    assert k.qa_threshold() == ("25/2", 2, 2)
    assert not k.is_qa_slope("25/2")
    assert k.is_qa_slope("13")
    assert k.qa_slope_via_pipeline("(27,2)")
    assert k.moser_surgery("13") == "SFS[S2: (5,3) (3,-2) (2,1)]"

    assert qaslopes.neg_cf_expand("12/5") == [3, 2, 3]
    assert qaslopes.triad_partners("12/5") == ("5/2", "7/3")
    assert qaslopes.distance("5/2", "7/3") == 1

    normalized, qa = qaslopes.montesinos_qa("SFS[S2:(2,1)(5,2)(7,-4)]")
    assert not qa, normalized

    d = qaslopes.propagate("2", "12/5")
    assert d is not None and qaslopes.verify_derivation(d, "2")
    assert json.loads(d)[-1]["target"] == "12/5"
    assert qaslopes.propagate("2", "5/3") is None

    trefoil = qaslopes.LinkDiagram("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]")
    assert trefoil.determinant() == 3 and trefoil.is_alternating()
    assert trefoil.smooth(0, 0).reduce().determinant() + trefoil.smooth(0, 1).reduce().determinant() == 3
    verdict, cert = qaslopes.certify_qa(trefoil)
    assert verdict == "QA" and qaslopes.verify_certificate(cert)

    db = qaslopes.QaDatabase.seed()
    assert len(db) == 2
    k13 = qaslopes.LinkDiagram(
        "[[1,2,3,4],[1,5,6,7],[2,7,8,9],[4,10,11,12],[5,13,14,6],[9,15,16,3],[15,17,18,16],"
        "[10,18,17,19],[12,11,20,21],[13,21,22,14],[19,23,24,20],[22,24,23,8]]"
    )
    assert k13.determinant() == 81
    verdict, _ = qaslopes.certify_qa(k13, db)
    assert verdict == "QA"

    square = qaslopes.short_slopes(1 + 0j, 1j, 2.0)
    assert sorted((p, q) for p, q, _ in square) == [(-1, 1), (0, 1), (1, 0), (1, 1)]
    assert qaslopes.fps_bound(1e9) == 10.1
    assert abs(qaslopes.normalized_length(1 + 0j, 1j, "3/4") - 5.0) < 1e-12

    try:
        qaslopes.TorusKnot(4, 2)
    except qaslopes.QaSlopesError:
        pass
    else:
        raise AssertionError("T(4,2) accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
