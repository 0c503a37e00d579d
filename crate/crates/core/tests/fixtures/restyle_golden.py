# order_summary: totals per customer_id
MAX_LINE_ITEMS = 50


class OrderBook:
    def __init__(self, storeName):
        self.storeName = storeName
        self.lineItems = []

    def addItem(self, itemName, unitPrice, itemCount=1):
        if len(self.lineItems) >= MAX_LINE_ITEMS:
            raise ValueError("too many line_items")
        self.lineItems.append((itemName, unitPrice * itemCount))

    def totalPrice(self):
        runningTotal = 0
        for itemName, linePrice in self.lineItems:
            runningTotal += linePrice
        return runningTotal


def summarizeOrders(orderBooks):
    """Return total_price for each store_name."""
    perStore = {}
    for orderBook in orderBooks:
        storeTotal = orderBook.totalPrice()
        if storeTotal > 0:
            perStore[orderBook.storeName] = storeTotal
    print("summarized", len(perStore), "stores")  # keep log_line
    return perStore
