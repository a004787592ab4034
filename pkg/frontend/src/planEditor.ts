/** Per-item ordered action selection emitting the service plan payload. */

import { ALL_ACTIONS } from './taxonomy';
import type { ReviewItem } from './types';

export class PlanEditor {
  private actions = new Map<string, string[]>();

  constructor(private items: ReviewItem[]) {
    for (const item of items) {
      this.actions.set(item.id, []);
    }
  }

  itemIds(): string[] {
    return this.items.map((i) => i.id);
  }

  actionsFor(itemId: string): string[] {
    return [...this.requireItem(itemId)];
  }

  /** Append an action; the picker is closed, unknown labels are rejected. */
  addAction(itemId: string, label: string): void {
    if (!ALL_ACTIONS.includes(label)) {
      throw new Error(`unknown response action: ${label}`);
    }
    this.requireItem(itemId).push(label);
  }

  removeAction(itemId: string, index: number): void {
    const list = this.requireItem(itemId);
    if (index < 0 || index >= list.length) {
      throw new Error(`no action at index ${index}`);
    }
    list.splice(index, 1);
  }

  /** Reorder within an item; payload order always follows UI order. */
  moveAction(itemId: string, from: number, to: number): void {
    const list = this.requireItem(itemId);
    if (from < 0 || from >= list.length || to < 0 || to >= list.length) {
      throw new Error(`move out of range: ${from} -> ${to}`);
    }
    const [label] = list.splice(from, 1);
    list.splice(to, 0, label);
  }

  isEmpty(): boolean {
    return [...this.actions.values()].every((list) => list.length === 0);
  }

  /** The plan payload; an empty plan is allowed (maps to a plan-free setting). */
  payload(): Record<string, string[]> {
    const plan: Record<string, string[]> = {};
    for (const [itemId, list] of this.actions) {
      if (list.length > 0) {
        plan[itemId] = [...list];
      }
    }
    return plan;
  }

  private requireItem(itemId: string): string[] {
    const list = this.actions.get(itemId);
    if (!list) {
      throw new Error(`unknown review item: ${itemId}`);
    }
    return list;
  }
}
