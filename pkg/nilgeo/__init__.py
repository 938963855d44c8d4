# nilgeo: left-invariant Riemannian and Randers geometry on metric Lie algebras
