package ex;

public class C2 implements Pair {
  public Object first() { return null; }
  public Object second() { return null; }
  public void swap() {}
  public int size() { return 2; }
}
