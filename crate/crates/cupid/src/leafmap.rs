use cupid_core::PartitionTree;
use serde::{Deserialize, Serialize};

/// One leaf of the cuboid map as written to JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafRect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

/// Leaf rectangles in preorder.
pub fn leaf_map(tree: &PartitionTree) -> Vec<LeafRect> {
    tree.leaves_preorder()
        .into_iter()
        .map(|c| LeafRect { x: c.x, y: c.y, w: c.w, h: c.h })
        .collect()
}

/// `[{"x":..,"y":..,"w":..,"h":..}, ...]`
pub fn leaf_map_json(tree: &PartitionTree) -> String {
    serde_json::to_string(&leaf_map(tree)).expect("plain integer records always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use cupid_core::Split;

    #[test]
    fn two_leaf_map() {
        let mut tree = PartitionTree::new(4, 4);
        tree.split_leaf(0, Split::vertical(2), None).unwrap();
        assert_eq!(
            leaf_map_json(&tree),
            r#"[{"x":0,"y":0,"w":2,"h":4},{"x":2,"y":0,"w":2,"h":4}]"#
        );
    }
}
