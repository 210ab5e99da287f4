try:
    from ._amfem import (
        Complex,
        EmptySpaceError,
        MarkingError,
        Mesh,
        MeshError,
        build_complex,
        builtin_mesh,
        builtin_mesh_names,
        dorfler,
        load_mesh,
        poincare_constants,
        problem_names,
        run,
        solve,
        verify,
    )
except ImportError:  # in-tree build: the extension sits next to, not inside, the package
    from _amfem import (
        Complex,
        EmptySpaceError,
        MarkingError,
        Mesh,
        MeshError,
        build_complex,
        builtin_mesh,
        builtin_mesh_names,
        dorfler,
        load_mesh,
        poincare_constants,
        problem_names,
        run,
        solve,
        verify,
    )

__all__ = [
    "Complex",
    "EmptySpaceError",
    "MarkingError",
    "Mesh",
    "MeshError",
    "build_complex",
    "builtin_mesh",
    "builtin_mesh_names",
    "dorfler",
    "load_mesh",
    "poincare_constants",
    "problem_names",
    "run",
    "solve",
    "verify",
]
