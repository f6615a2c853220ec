class Account:
    def __init__(self, owner, balance):
        self.owner = owner
        self.balance = balance
        self.history = []

    def deposit(self, amount):
        if amount <= 0:
            return False
        self.balance = self.balance + amount
        self.history.append(("deposit", amount))
        return True

    def withdraw(self, amount):
        if amount <= 0 or amount > self.balance:
            return False
        self.balance = self.balance - amount
        self.history.append(("withdraw", amount))
        return True


def apply_interest(account, rate_percent, years):
    for year in range(years):
        interest = account.balance * rate_percent // 100
        account.deposit(interest)
    return account.balance


def transfer(source, target, amount):
    if source.withdraw(amount):
        target.deposit(amount)
        return True
    return False


def statement(account):
    lines = [account.owner + ":"]
    running = 0
    for kind, amount in account.history:
        if kind == "deposit":
            running = running + amount
        else:
            running = running - amount
        lines.append("  " + kind + " " + str(amount) + " -> " + str(running))
    return "\n".join(lines)


def main():
    alice = Account("alice", 0)
    bob = Account("bob", 0)
    alice.deposit(500)
    bob.deposit(120)
    for i in range(1, 6):
        ok = transfer(alice, bob, i * 40)
        print("transfer", i * 40, "ok:", ok, "balances:", alice.balance, bob.balance)
    print("bad withdraw:", bob.withdraw(10000), "bad deposit:", alice.deposit(-5))
    print("after interest:", apply_interest(alice, 5, 4), apply_interest(bob, 3, 2))
    print(statement(alice))
    print(statement(bob))


main()
