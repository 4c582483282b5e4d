//! Singly linked lists of vertex ids living in one shared node arena.
//!
//! Lists only grow at the head. Removal happens during a walk, where the
//! visitor decides for each entry whether to keep it, drop it or stop. Freed
//! nodes are recycled through an intrusive free list.

use crate::graph::VertexId;

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LazyList {
    head: u32,
    len: usize,
}

impl Default for LazyList {
    fn default() -> Self {
        LazyList { head: NIL, len: 0 }
    }
}

impl LazyList {
    /// Physical entry count, stale entries included.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// What a walk does with the entry it is looking at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Keep,
    Drop,
    /// Keep this entry and end the walk.
    Stop,
}

#[derive(Debug, Clone, Default)]
pub struct NodePool {
    value: Vec<u32>,
    next: Vec<u32>,
    free: u32,
    live: usize,
}

impl NodePool {
    pub fn new() -> Self {
        NodePool { value: Vec::new(), next: Vec::new(), free: NIL, live: 0 }
    }

    /// Nodes currently linked into some list.
    pub fn live(&self) -> usize {
        self.live
    }

    /// Nodes allocated, live or recyclable.
    pub fn allocated(&self) -> usize {
        self.value.len()
    }

    pub fn push_front(&mut self, list: &mut LazyList, v: VertexId) {
        let node = if self.free != NIL {
            let node = self.free;
            self.free = self.next[node as usize];
            self.value[node as usize] = v as u32;
            self.next[node as usize] = list.head;
            node
        } else {
            self.value.push(v as u32);
            self.next.push(list.head);
            (self.value.len() - 1) as u32
        };
        list.head = node;
        list.len += 1;
        self.live += 1;
    }

    fn release(&mut self, node: u32) {
        self.next[node as usize] = self.free;
        self.free = node;
        self.live -= 1;
    }

    /// Visits entries from the head until the visitor says [`Step::Stop`] or
    /// the list ends. Returns the entry the walk stopped at.
    pub fn walk(&mut self, list: &mut LazyList, mut visit: impl FnMut(VertexId) -> Step) -> Option<VertexId> {
        let mut prev = NIL;
        let mut cur = list.head;
        while cur != NIL {
            let next = self.next[cur as usize];
            let v = self.value[cur as usize] as VertexId;
            match visit(v) {
                Step::Keep => prev = cur,
                Step::Drop => {
                    if prev == NIL {
                        list.head = next;
                    } else {
                        self.next[prev as usize] = next;
                    }
                    list.len -= 1;
                    self.release(cur);
                }
                Step::Stop => return Some(v),
            }
            cur = next;
        }
        None
    }

    pub fn clear(&mut self, list: &mut LazyList) {
        self.walk(list, |_| Step::Drop);
    }

    pub fn iter<'a>(&'a self, list: &LazyList) -> impl Iterator<Item = VertexId> + 'a {
        let mut cur = list.head;
        std::iter::from_fn(move || {
            if cur == NIL {
                return None;
            }
            let v = self.value[cur as usize] as VertexId;
            cur = self.next[cur as usize];
            Some(v)
        })
    }

    /// Forgets every node and returns the memory. All lists must be reset too.
    pub fn reset(&mut self) {
        self.value = Vec::new();
        self.next = Vec::new();
        self.free = NIL;
        self.live = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_iterate_from_head() {
        let mut pool = NodePool::new();
        let mut list = LazyList::default();
        for v in [1, 2, 3] {
            pool.push_front(&mut list, v);
        }
        assert_eq!(pool.iter(&list).collect::<Vec<_>>(), vec![3, 2, 1]);
        assert_eq!(list.len(), 3);
    }

    #[test]
    fn walk_drops_and_stops() {
        let mut pool = NodePool::new();
        let mut list = LazyList::default();
        for v in [1, 2, 3, 4, 5] {
            pool.push_front(&mut list, v);
        }
        let stopped = pool.walk(&mut list, |v| match v {
            5 | 3 => Step::Drop,
            2 => Step::Stop,
            _ => Step::Keep,
        });
        assert_eq!(stopped, Some(2));
        assert_eq!(pool.iter(&list).collect::<Vec<_>>(), vec![4, 2, 1]);
        assert_eq!(pool.live(), 3);
    }

    #[test]
    fn freed_nodes_are_recycled() {
        let mut pool = NodePool::new();
        let mut a = LazyList::default();
        let mut b = LazyList::default();
        for v in 0..4 {
            pool.push_front(&mut a, v);
        }
        pool.clear(&mut a);
        assert!(a.is_empty());
        for v in 0..4 {
            pool.push_front(&mut b, v);
        }
        assert_eq!(pool.allocated(), 4);
        assert_eq!(pool.live(), 4);
    }
}
