# order_summary: totals per customer_id
MAX_LINE_ITEMS = 50


class OrderBook:
	def __init__(self, store_name):
		self.store_name = store_name
		self.line_items = []

	def add_item(self, item_name, unit_price, item_count=1):
		if len(self.line_items) >= MAX_LINE_ITEMS:
			raise ValueError("too many line_items")
		self.line_items.append((item_name, unit_price * item_count))

	def total_price(self):
		running_total = 0
		for item_name, line_price in self.line_items:
			running_total += line_price
		return running_total


def summarize_orders(order_books):
	"""Return total_price for each store_name."""
	per_store = {}
	for order_book in order_books:
		store_total = order_book.total_price()
		if store_total > 0:
			per_store[order_book.store_name] = store_total
	print("summarized", len(per_store), "stores")  # keep log_line
	return per_store
